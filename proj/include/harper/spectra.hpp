#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "harper/lattice.hpp"

namespace harper {

struct EigenSystem {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // column j pairs with values(j)
    // degenerate(j): values(j) lies within tol of a neighbour
    std::vector<bool> degenerate;
};

// Phase gauge: the largest-magnitude component of every eigenvector is real
// positive, near-ties going to the lowest flat index. degeneracy_tol defaults
// to 1e-10 times the largest matrix entry.
EigenSystem eig_hermitian(const HermitianMatrix& H, double degeneracy_tol = -1);

double max_residual(const HermitianMatrix& H, const EigenSystem& es);
double orthonormality_error(const EigenSystem& es);

std::vector<double> linspace(double a, double b, int n);
// 401 points over [-pi, pi]
std::vector<double> default_k_grid();
// 401 points over [0, 2 pi]
std::vector<double> default_butterfly_grid();

struct BandStructure {
    std::vector<double> k_grid;
    Eigen::MatrixXd bands;        // (k, band), ascending per k
    Eigen::MatrixXd edge_weight;  // <m> of each state
};

BandStructure bands_open_column(const LatticeSpec& spec, const std::vector<double>& k_grid,
                                int threads = 1);

struct ButterflySpectrum {
    std::vector<double> gamma_grid;
    Eigen::MatrixXd levels;  // (gamma, level)
};

ButterflySpectrum butterfly(const LatticeSpec& spec, const std::vector<double>& gamma_grid,
                            int threads = 1);

struct PerturbativePair {
    double E0;      // band minimum at k_x = 0
    double Egamma;  // branch minimum at k_x = +-gamma
};

// The two small-K expressions as published (hbar = 1).
PerturbativePair threeleg_perturbative(double gamma, double g_x, double g_y);
// Same with the second-order shift of the k_x = +-gamma branch re-derived
// (level repulsion lowers it): -2 g_x - (g_y^2 / 2 g_x) / (1 - cos gamma).
PerturbativePair threeleg_perturbative_rederived(double gamma, double g_x, double g_y);

// Large-K flat bands of the three-leg ladder, first order in g_x / g_y.
std::array<double, 3> threeleg_strong_coupling(double k_x, double gamma, double g_x, double g_y);

// omega_2 - omega_1 of the open real-space spectrum, (gamma, K) with g_y = K g_x
Eigen::MatrixXd gap_map(const LatticeSpec& spec, const std::vector<double>& gamma_grid,
                        const std::vector<double>& K_grid, int threads = 1);

}  // namespace harper
