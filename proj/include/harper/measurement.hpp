#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "harper/lattice.hpp"
#include "harper/spectra.hpp"

namespace harper {

struct DriveSpec {
    double Omega = 0;  // rad/s
    double nu = 0;     // detuning, rad/s
    Eigen::VectorXcd site_weights;
    Eigen::VectorXd gamma_relax;    // per site, 1/s
    Eigen::VectorXd Gamma_dephase;  // per site, 1/s
    void validate() const;
};

struct EffectiveRates {
    double gamma1 = 0;
    double Gamma1 = 0;
};

// |psi|^2-weighted sums of per-site rates; psi must be normalised
EffectiveRates effective_rates(const Eigen::VectorXcd& psi, const Eigen::VectorXd& gamma_relax,
                               const Eigen::VectorXd& Gamma_dephase);

// <G|rho|G> = 1/2 [1 - exp(-(gamma1 + Gamma1/2) t / 2) cos(2 Omega t)]
double generation_fidelity(double Omega, double gamma1, double Gamma1, double t);
// at Omega t = pi/2
double generation_fidelity_pi2(double Omega, double gamma1, double Gamma1);

struct PopulationTrace {
    std::vector<double> times, values;
    // equal lengths and |value| <= 1 + 1e-9
    void validate() const;
};

// decay envelope of a pair measurement: (gamma_a + gamma_b + Gamma_a + Gamma_b) / 4
double pair_decay_rate(double gamma_a, double gamma_b, double Gamma_a, double Gamma_b);

// exp(-decay t) [cos(2 g t) + sin(2 g t) I_G / g]
double rabi_population_difference(double t, double g, double I_G, double decay);
PopulationTrace rabi_trace(const std::vector<double>& times, double g, double I_G, double decay);

// additive N(0, sigma^2) noise from mt19937_64 seeded by (seed, stream)
PopulationTrace with_noise(const PopulationTrace& trace, double sigma, std::uint64_t seed,
                           std::uint64_t stream = 0);

struct CurrentFit {
    double I_G = 0, decay = 0;
    double sigma_I = 0, sigma_decay = 0;  // from sigma_res^2 (J^T J)^-1
    double residual_rms = 0;
    int evaluations = 0;
};

// least squares over (I_G, decay) with g known (Levenberg-Marquardt)
CurrentFit extract_current_fit(const PopulationTrace& trace, double g_known);

// Site-pair readout after the X-pi/4 pulse (P1) and after Z-pi/2 then X-pi/4
// (P2), both as the population left on site a.
struct PairReadout {
    double pop_a = 0, pop_b = 0, P1 = 0, P2 = 0;
};
PairReadout simulate_pair_readout(std::complex<double> a, std::complex<double> b);
// relative phase theta_b - theta_a in (-pi, pi]
double relative_phase(const PairReadout& r);

struct ReconstructedState {
    Eigen::VectorXcd amplitudes;  // flat index i*L + j
    Eigen::VectorXd phases;       // theta_nm in (-pi, pi]
    std::string gauge;
    int detours = 0;  // sites linked through a neighbour off the standard path
};

// Path: up the left column from (-N,-M), then along each row; psi(-N,-M) >= 0.
// A site whose path predecessor is dark (|psi| < 1e-12) is linked instead to an
// already-phased lit lattice neighbour. strict = true raises PathError there.
ReconstructedState reconstruct_eigenstate_special(const Eigen::VectorXcd& psi,
                                                  const LatticeSpec& spec, bool strict = false);
// j-th (0-based) eigenstate of the real-space Hamiltonian
ReconstructedState reconstruct_eigenstate_special(const LatticeSpec& spec, int j,
                                                  bool strict = false);

// |<a|b>| for normalised a, b
double state_fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// P(k) = sum_m |L^{-1/2} sum_n exp(-i (gamma m n + k n)) psi(n, m)|^2
std::vector<double> band_weight(const Eigen::VectorXcd& psi, const LatticeSpec& spec,
                                const std::vector<double>& k_grid);

struct BandPoint {
    double k = 0, omega = 0, weight = 0;
};

inline constexpr int default_band_k_points = 2048;

// local maxima of P(k) above 0.1 max on a grid over [-pi, pi); with periodic rows
// the grid is the ring momenta 2 pi q / L and every component above 0.1 max counts
std::vector<BandPoint> band_points_special(const Eigen::VectorXcd& psi, double omega,
                                           const LatticeSpec& spec,
                                           int nk = default_band_k_points);
std::vector<BandPoint> band_points_special(const LatticeSpec& spec, int j,
                                           int nk = default_band_k_points);

struct FeatureSpectrum {
    std::vector<double> omega_grid;
    std::vector<double> F_values;
    std::vector<double> peaks;       // refined local maxima of F
    std::vector<double> amplitudes;  // F at the peaks
    // fictitious eigenstate at each peak, and its overlap with the eigenspace
    // of the nearest true level
    std::vector<Eigen::VectorXcd> states;
    std::vector<double> fidelities;
    std::vector<std::string> warnings;
    double T = 0;
};

inline constexpr double default_feature_T_gx = 200;  // T in units of 1/g_x

// F(omega) = 1/2 sum_j sinc^2((omega - w_j) T/2) + 1/2 sinc^2(omega T/2)
double feature_function(const Eigen::VectorXd& levels, double T, double omega);

// |psi~_nm(omega)>, the single-excitation part of the windowed transform for
// the initial state (|0> + |1_nm>)/sqrt2
Eigen::VectorXcd windowed_state(const EigenSystem& es, int site, double T, double omega);

// fictitious eigenstate built from the windowed states at omega
Eigen::VectorXcd fictitious_eigenstate(const EigenSystem& es, double T, double omega);

FeatureSpectrum feature_spectrum(const EigenSystem& es, double T,
                                 const std::vector<double>& omega_grid);
FeatureSpectrum feature_spectrum(const LatticeSpec& spec, double T,
                                 const std::vector<double>& omega_grid);
// grid over the spectrum +- 8 pi / T with spacing 2 pi / (10 T)
std::vector<double> default_feature_grid(const Eigen::VectorXd& levels, double T);

// chi_nm(t) = sum_j |psi^j_nm|^2 exp(i w_j t)
Eigen::VectorXcd site_signal(const EigenSystem& es, double t);

struct ButterflySignal {
    std::vector<double> times;
    Eigen::VectorXcd chi_bar;  // (1/LW) sum_j exp(i w_j t)
    std::vector<double> omega_grid;
    std::vector<double> spectrum;  // |sum w chi e^{-i omega t}| / sum w (Hann)
    std::vector<double> peaks, amplitudes;
    double window = 0;
};

ButterflySignal butterfly_signal(const EigenSystem& es, const std::vector<double>& t_grid);
ButterflySignal butterfly_signal(const LatticeSpec& spec, const std::vector<double>& t_grid);
// uniform grid on [0, window] sampled at 4x the Nyquist rate of the spectrum
std::vector<double> default_signal_times(const Eigen::VectorXd& levels, double window);

}  // namespace harper
