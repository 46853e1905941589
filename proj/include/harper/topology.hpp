#pragma once

#include <Eigen/Dense>
#include <vector>

#include "harper/lattice.hpp"

namespace harper {

// Per-plaquette field strength of the link-variable construction. The lattice
// field is F12 = i * phase; summed over the zone, phase gives 2 pi C_j.
struct BerryField {
    std::vector<double> kx_grid, ky_grid;  // lower-left plaquette corners
    std::vector<Eigen::MatrixXd> phase;    // per band, (kx, ky)
    int grid = 0;
    double max_abs_phase = 0;
};

struct ChernResult {
    std::vector<int> chern;    // per band
    std::vector<int> winding;  // partial sums, per gap (last entry closes to 0)
    Eigen::MatrixXd band_energies;  // (kx*ky grid point, band)
    int grid = 0;
    double max_residue = 0;  // distance of the raw sums from integers
    double max_abs_phase = 0;
};

inline constexpr int default_chern_grid = 60;
inline constexpr int max_chern_grid = 480;
// plaquette phases beyond this trigger refinement
inline constexpr double admissible_phase = 1.5707963267948966;

BerryField berry_field(const LatticeSpec& spec, int P, int Q, int grid = default_chern_grid);

// refine: double the grid while inadmissible, up to max_chern_grid
ChernResult chern_numbers(const LatticeSpec& spec, int P, int Q, int grid = default_chern_grid,
                          bool refine = true);

// sum-over-states curvature of band j (0-based) at k; returns Im F (F is imaginary)
double berry_perturbative(double k_x, double k_y, const LatticeSpec& spec, int P, int Q, int j);

struct EdgeBranchCount {
    std::vector<double> mid_gap;  // per gap
    std::vector<int> top;         // signed crossings with <m> > 0
    std::vector<int> bottom;      // signed crossings with <m> < 0
};

// Cuts the open-column bands of spec (width spec.W) at the mid-gap frequencies
// of the Bloch spectrum and sums sign(d omega / d k_x) over edge crossings.
EdgeBranchCount edge_branch_winding(const LatticeSpec& spec, int P, int Q, int nk = 2001,
                                    int threads = 1);

}  // namespace harper
