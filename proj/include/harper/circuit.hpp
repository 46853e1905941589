#pragma once

#include <string>
#include <utility>
#include <vector>

namespace harper {

struct RawCircuitParams {
    double L_J_odd = 0;  // H
    double L_J_even = 0;
    double L_T = 0;
    double C = 0;  // F
    double L0 = 0;
    double M0 = 0;

    // Table I of the reference design
    static RawCircuitParams typical();
    // throws ValidationError naming the offending field
    void validate() const;
    std::vector<std::string> warnings() const;
};

struct FluxBias {
    double phi_bar = 0;  // Wb
    double phi_eff = 0;
    double phi_odd = 0;
    double phi_even = 0;
    double gamma = 0;  // rad

    void validate() const;
};

struct Range {
    double lo = 0;
    double hi = 0;
};

struct DerivedCircuitParams {
    double E_J_odd = 0, E_J_even = 0, E_C = 0;  // J
    double omega_p_odd = 0, omega_p_even = 0;   // rad/s
    double omega_odd = 0, omega_even = 0, omega_oe = 0;
    double Z_odd = 0, Z_even = 0;  // Ohm
    double t_y = 0;
    // at the supplied bias
    double g_y = 0;
    double M_odd = 0, M_even = 0;  // H
    double G_odd = 0, G_even = 0;
    // ranges over the full flux window
    Range g_y_range, M_range, G_odd_range, G_even_range;
    std::vector<std::string> warnings;
};

double mutual_inductance(double phi, const RawCircuitParams& raw);

struct EffectiveNetwork {
    double coupler_inductance;  // L_T / cos, +inf at the switch-off point
    double self_base;           // 4 L0
    double mutual;              // -M0^2 / (2 L0 + coupler_inductance)
};
EffectiveNetwork effective_network(double phi, const RawCircuitParams& raw);

DerivedCircuitParams derive_params(const RawCircuitParams& raw, const FluxBias& bias);

double column_coupling(double t_y, const FluxBias& bias);

double row_coupling(double M, double omega_p, double Z);
double row_coupling(double M, double omega_p, double omega_p2, double Z, double Z2);

// flux on [0, Phi0/2] giving G = -target_gx for one row parity
double solve_row_flux_single(double target_gx, double L_J, const RawCircuitParams& raw);
// (phi_odd, phi_even)
std::pair<double, double> solve_row_flux(double target_gx, const RawCircuitParams& raw);
// achievable g_x = -G interval for one parity
Range row_gx_range(double L_J, const RawCircuitParams& raw);

// column coupler flux of bond (n,m)-(n,m+1)
double flux_drive(int n, int m, double t, const FluxBias& bias, double omega_oe);

double bessel_j1(double x);

}  // namespace harper
