#pragma once

#include <Eigen/Dense>
#include <complex>

namespace harper {

using cplx = std::complex<double>;
using HermitianMatrix = Eigen::MatrixXcd;

enum class Boundary { open, periodic };

// Sites carry centred coordinates n = j - (L-1)/2, m = i - (W-1)/2 with
// column j in [0, L) and row i in [0, W); flat index = i*L + j.
// Odd L, W give the integer ranges [-N, N], [-M, M]. Even sizes are allowed
// (half-integer coordinates, gauge-equivalent to any other centring).
struct LatticeSpec {
    int L = 1;
    int W = 1;
    double g_x = 0;  // rad/s
    double g_y = 0;
    double gamma = 0;  // rad
    Boundary row_boundary = Boundary::open;
    Boundary col_boundary = Boundary::open;

    static LatticeSpec from_half(int N, int M_half, double g_x, double g_y, double gamma);

    int dim() const { return L * W; }
    int flat(int j, int i) const { return i * L + j; }
    double n_of(int j) const { return j - 0.5 * (L - 1); }
    double m_of(int i) const { return i - 0.5 * (W - 1); }
    double K() const { return g_y / g_x; }
    double coupling_scale() const;
    bool is_open() const {
        return row_boundary == Boundary::open && col_boundary == Boundary::open;
    }
    // throws ValidationError
    void validate() const;
};

// wrap into (-pi, pi]
double wrap_angle(double a);

HermitianMatrix build_real_space(const LatticeSpec& spec);
HermitianMatrix build_quasimomentum(double k_x, const LatticeSpec& spec);
HermitianMatrix build_bloch(double k_x, double k_y, const LatticeSpec& spec, int P, int Q);
// analytic k-derivatives of build_bloch
HermitianMatrix bloch_dkx(double k_x, const LatticeSpec& spec, int P, int Q);
HermitianMatrix bloch_dky(double k_y, const LatticeSpec& spec, int P, int Q);

// dispersion of a single row, eps_k = -2 g_x cos k
inline double band_eps(double k, double g_x) { return -2.0 * g_x * std::cos(k); }

// true if the matrix equals its adjoint within rel * ||H||_F
bool is_hermitian(const HermitianMatrix& H, double rel = 1e-14);

}  // namespace harper
