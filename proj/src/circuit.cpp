#include "harper/circuit.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "harper/errors.hpp"
#include "harper/units.hpp"

namespace harper {

RawCircuitParams RawCircuitParams::typical() {
    RawCircuitParams r;
    r.L_J_odd = 7.9 * nH;
    r.L_J_even = 8.3 * nH;
    r.L_T = 1.3 * nH;
    r.C = 91 * fF;
    r.L0 = 210 * pH;
    r.M0 = 180 * pH;
    return r;
}

void RawCircuitParams::validate() const {
    auto check = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0))
            throw ValidationError(std::string("circuit.") + name + " must be strictly positive");
    };
    check(L_J_odd, "L_J_odd");
    check(L_J_even, "L_J_even");
    check(L_T, "L_T");
    check(C, "C");
    check(L0, "L0");
    check(M0, "M0");
}

std::vector<std::string> RawCircuitParams::warnings() const {
    std::vector<std::string> w;
    if (L0 > L_T / 4)
        w.push_back("L0 > L_T/4: the coupler-loop flux approximation Phi_T ~ Phi is doubtful");
    double Mmax = std::max(std::abs(mutual_inductance(0, *this)),
                           std::abs(mutual_inductance(flux_quantum / 2, *this)));
    if (Mmax > 0.1 * std::min(L_J_odd, L_J_even))
        w.push_back("|M| is not small against L_J: weak-coupling expansion is doubtful");
    return w;
}

void FluxBias::validate() const {
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || std::abs(v) > flux_quantum / 2 * (1 + 1e-12))
            throw ValidationError(std::string("bias.") + name + " must lie in [-Phi0/2, Phi0/2]");
    };
    check(phi_bar, "phi_bar");
    check(phi_eff, "phi_eff");
    check(phi_odd, "phi_odd");
    check(phi_even, "phi_even");
    if (!std::isfinite(gamma) || gamma <= -pi || gamma > pi)
        throw ValidationError("bias.gamma must lie in (-pi, pi]");
}

double mutual_inductance(double phi, const RawCircuitParams& raw) {
    double c = std::cos(two_pi * phi / flux_quantum);
    double den = raw.L_T + 2 * raw.L0 * c;
    if (std::abs(den) <= 1e-12 * raw.L_T) {
        std::ostringstream os;
        os << "mutual_inductance: singular denominator at phi = " << phi / flux_quantum << " Phi0";
        throw DomainError(os.str());
    }
    return -raw.M0 * raw.M0 * c / den;
}

EffectiveNetwork effective_network(double phi, const RawCircuitParams& raw) {
    double c = std::cos(two_pi * phi / flux_quantum);
    EffectiveNetwork net{};
    net.self_base = 4 * raw.L0;
    if (std::abs(c) < 1e-15) {
        net.coupler_inductance = std::numeric_limits<double>::infinity();
        net.mutual = 0.0;
        return net;
    }
    net.coupler_inductance = raw.L_T / c;
    double den = 2 * raw.L0 + net.coupler_inductance;
    if (std::abs(den) <= 1e-12 * raw.L_T) {
        std::ostringstream os;
        os << "effective_network: singular coupler branch at phi = " << phi / flux_quantum
           << " Phi0";
        throw DomainError(os.str());
    }
    net.mutual = -raw.M0 * raw.M0 / den;
    return net;
}

double column_coupling(double t_y, const FluxBias& bias) {
    return -2 * t_y * std::sin(two_pi * bias.phi_bar / flux_quantum) *
           bessel_j1(two_pi * bias.phi_eff / flux_quantum);
}

double row_coupling(double M, double omega_p, double Z) { return -(M / 2) * omega_p * omega_p / Z; }

double row_coupling(double M, double omega_p, double omega_p2, double Z, double Z2) {
    return -(M / 2) * omega_p * omega_p2 / std::sqrt(Z * Z2);
}

namespace {

double j1_peak() {
    // maximum of J1 on [0, pi], the reachable argument window
    auto r = boost::math::tools::brent_find_minima([](double x) { return -bessel_j1(x); }, 0.5,
                                                   3.0, 50);
    return -r.second;
}

Range m_range(const RawCircuitParams& raw) {
    double a = mutual_inductance(0, raw), b = mutual_inductance(flux_quantum / 2, raw);
    return {std::min(a, b), std::max(a, b)};
}

}  // namespace

DerivedCircuitParams derive_params(const RawCircuitParams& raw, const FluxBias& bias) {
    raw.validate();
    DerivedCircuitParams d;
    const double phi_red = flux_quantum / two_pi;
    d.E_J_odd = phi_red * phi_red / raw.L_J_odd;
    d.E_J_even = phi_red * phi_red / raw.L_J_even;
    d.E_C = e_charge * e_charge / (2 * raw.C);
    d.omega_p_odd = std::sqrt(8 * d.E_C * d.E_J_odd) / hbar;
    d.omega_p_even = std::sqrt(8 * d.E_C * d.E_J_even) / hbar;
    d.omega_odd = d.omega_p_odd - d.E_C / hbar;
    d.omega_even = d.omega_p_even - d.E_C / hbar;
    d.omega_oe = d.omega_odd - d.omega_even;
    d.Z_odd = std::sqrt(raw.L_J_odd / raw.C);
    d.Z_even = std::sqrt(raw.L_J_even / raw.C);
    d.t_y = raw.M0 * raw.M0 * d.omega_p_odd * d.omega_p_even /
            (4 * raw.L_T * std::sqrt(d.Z_odd * d.Z_even));

    d.g_y = column_coupling(d.t_y, bias);
    d.M_odd = mutual_inductance(bias.phi_odd, raw);
    d.M_even = mutual_inductance(bias.phi_even, raw);
    d.G_odd = row_coupling(d.M_odd, d.omega_p_odd, d.Z_odd);
    d.G_even = row_coupling(d.M_even, d.omega_p_even, d.Z_even);

    double gmax = 2 * d.t_y * j1_peak();
    d.g_y_range = {-gmax, gmax};
    d.M_range = m_range(raw);
    auto g_of = [](Range M, double wp, double Z) {
        double a = row_coupling(M.lo, wp, Z), b = row_coupling(M.hi, wp, Z);
        return Range{std::min(a, b), std::max(a, b)};
    };
    d.G_odd_range = g_of(d.M_range, d.omega_p_odd, d.Z_odd);
    d.G_even_range = g_of(d.M_range, d.omega_p_even, d.Z_even);
    d.warnings = raw.warnings();
    return d;
}

Range row_gx_range(double L_J, const RawCircuitParams& raw) {
    double wp = 1 / std::sqrt(L_J * raw.C), Z = std::sqrt(L_J / raw.C);
    Range M = m_range(raw);
    double a = -row_coupling(M.lo, wp, Z), b = -row_coupling(M.hi, wp, Z);
    return {std::min(a, b), std::max(a, b)};
}

double solve_row_flux_single(double target_gx, double L_J, const RawCircuitParams& raw) {
    raw.validate();
    Range r = row_gx_range(L_J, raw);
    double slack = 1e-12 * std::max(std::abs(r.lo), std::abs(r.hi));
    if (!(target_gx >= r.lo - slack && target_gx <= r.hi + slack)) {
        std::ostringstream os;
        os << "solve_row_flux: g_x/2pi = " << to_mhz(target_gx)
           << " MHz outside achievable interval [" << to_mhz(r.lo) << ", " << to_mhz(r.hi)
           << "] MHz";
        throw RangeError(os.str());
    }
    // G = -g_x = -(M/2) wp^2/Z  ->  M* = 2 g_x Z / wp^2, then invert M(c) for c = cos(2 pi phi/Phi0)
    double wp2 = 1 / (L_J * raw.C), Z = std::sqrt(L_J / raw.C);
    double Mt = 2 * target_gx * Z / wp2;
    double c = -Mt * raw.L_T / (raw.M0 * raw.M0 + 2 * raw.L0 * Mt);
    c = std::clamp(c, -1.0, 1.0);
    return flux_quantum / two_pi * std::acos(c);
}

std::pair<double, double> solve_row_flux(double target_gx, const RawCircuitParams& raw) {
    return {solve_row_flux_single(target_gx, raw.L_J_odd, raw),
            solve_row_flux_single(target_gx, raw.L_J_even, raw)};
}

double flux_drive(int n, int m, double t, const FluxBias& bias, double omega_oe) {
    double gp = (m % 2 != 0) ? -n * bias.gamma : n * bias.gamma;
    return bias.phi_bar + bias.phi_eff * std::cos(omega_oe * t + gp);
}

}  // namespace harper
