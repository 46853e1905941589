#pragma once

#include <Eigen/Dense>
#include <vector>

#include "harper/lattice.hpp"

namespace harper {

struct GroundState {
    Eigen::VectorXcd psi;  // flat-indexed, normalised
    double omega1 = 0;
    bool degenerate = false;
};

// Lowest eigenpair of the open lattice. A degenerate ground level is replaced
// by the recombination psi(n,m) + conj(psi(n,-m)), normalised.
GroundState ground_state(const LatticeSpec& spec);

// Bond currents in rad/s (probability per unit time, omega units).
// row(i, j): (j,i) -> (j+1,i); col(i, j): (j,i) -> (j,i+1).
struct CurrentPattern {
    int L = 0, W = 0;
    Eigen::MatrixXd row;  // W x (L-1)
    Eigen::MatrixXd col;  // (W-1) x L
    double scale = 1;     // coupling scale, sets the all-zero floor
};

CurrentPattern bond_currents(const Eigen::VectorXcd& psi, const LatticeSpec& spec);
inline CurrentPattern bond_currents(const GroundState& g, const LatticeSpec& spec) {
    return bond_currents(g.psi, spec);
}

double max_abs_current(const CurrentPattern& p);
// largest |net outflow| over sites
double max_divergence(const CurrentPattern& p);

// top-row sum minus bottom-row sum, W = 3 only
double chiral_current(const CurrentPattern& p);

// mean current per unit length along row i: sum_j row(i, j) / L
double edge_mean_current(const CurrentPattern& p, int i);

inline constexpr double default_vortex_tol = 1e-3;

// Plaquettes are glued across bonds whose |I| <= tol_rel * max|I|; a glued
// region away from the boundary counts as one vortex when every current on its
// rim circulates the same way. Returns the total over both senses.
int count_vortices(const CurrentPattern& p, double tol_rel = default_vortex_tol);

// Every bond set to sign(I) (0 below tol_rel * max|I|): the unit-arrow picture.
CurrentPattern normalized(const CurrentPattern& p, double tol_rel = default_vortex_tol);

struct PhaseMap {
    std::vector<double> gamma_grid, K_grid;
    Eigen::MatrixXi vortex;  // (gamma, K)
    Eigen::MatrixXd chiral;  // NaN unless W = 3
    double tol_rel = default_vortex_tol;
    double K_c = 0;          // NaN if not reached on the grid
    double gamma_c = 0;      // NaN if no multi-vortex cell
};

struct Thresholds {
    double K_c;
    double gamma_c;
};

// K_c: smallest grid K from which every larger grid K has count <= 1 at all gamma.
// gamma_c: smallest |gamma| at which some K has count > 1.
Thresholds find_thresholds(const Eigen::MatrixXi& vortex, const std::vector<double>& gamma_grid,
                           const std::vector<double>& K_grid);

PhaseMap vortex_map(const LatticeSpec& spec, const std::vector<double>& gamma_grid,
                    const std::vector<double>& K_grid, double tol_rel = default_vortex_tol,
                    int threads = 1);

// (W x nk) psi'(k, m) = L^{-1/2} sum_n exp(-i (gamma m n + k n)) psi(n, m)
Eigen::MatrixXcd quasimomentum_distribution(const Eigen::VectorXcd& psi, const LatticeSpec& spec,
                                            const std::vector<double>& k_grid);

struct Derivatives {
    std::vector<double> value, d1, d2;
};

// second-order finite differences on a uniform grid (one-sided at the ends)
Derivatives finite_differences(const std::vector<double>& v, double h);

// omega_1(K) with g_y = K g_x, and its K-derivatives
Derivatives ground_energy_derivatives(const LatticeSpec& spec, const std::vector<double>& K_grid,
                                      double gamma, int threads = 1);

// max over interior steps of |v[i+1]-v[i]| / max(neighbouring steps); a
// discontinuity shows up as an isolated large ratio
double max_jump_ratio(const std::vector<double>& v);

// bottom-edge current of the k_x = 0 bulk state, -(2 g_x / L) |e_-1(0)|^2 sin(gamma)
double edge_current_asymptotic(const LatticeSpec& spec);

}  // namespace harper
