#include "harper/spectra.hpp"

#include <cmath>

#include "harper/errors.hpp"
#include "harper/parallel.hpp"
#include "harper/units.hpp"

namespace harper {

namespace {

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
    double big = v.cwiseAbs().maxCoeff();
    if (big == 0) return;
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) >= big * (1 - 1e-9)) {
            pick = i;
            break;
        }
    v *= std::conj(v(pick)) / std::abs(v(pick));
}

}  // namespace

EigenSystem eig_hermitian(const HermitianMatrix& H, double degeneracy_tol) {
    if (H.rows() != H.cols()) throw ValidationError("eig_hermitian: matrix is not square");
    if (!is_hermitian(H, 1e-12)) throw ValidationError("eig_hermitian: matrix is not Hermitian");
    EigenSystem es;
    const Eigen::Index n = H.rows();
    if (n == 0) return es;
    HermitianMatrix Hs = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(Hs);
    if (solver.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver did not converge");
    es.values = solver.eigenvalues();
    es.vectors = solver.eigenvectors();
    for (Eigen::Index j = 0; j < n; ++j) fix_phase(es.vectors.col(j));

    if (degeneracy_tol < 0) {
        double scale = H.cwiseAbs().maxCoeff();
        degeneracy_tol = 1e-10 * (scale > 0 ? scale : 1.0);
    }
    es.degenerate.assign(n, false);
    for (Eigen::Index j = 0; j + 1 < n; ++j)
        if (es.values(j + 1) - es.values(j) <= degeneracy_tol)
            es.degenerate[j] = es.degenerate[j + 1] = true;
    return es;
}

double max_residual(const HermitianMatrix& H, const EigenSystem& es) {
    double r = 0;
    for (Eigen::Index j = 0; j < es.values.size(); ++j)
        r = std::max(r, (H * es.vectors.col(j) - es.values(j) * es.vectors.col(j)).norm());
    return r;
}

double orthonormality_error(const EigenSystem& es) {
    auto n = es.vectors.cols();
    return (es.vectors.adjoint() * es.vectors - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(std::max(n, 0));
    if (n == 1) v[0] = a;
    for (int i = 0; i < n && n > 1; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> default_k_grid() { return linspace(-pi, pi, 401); }
std::vector<double> default_butterfly_grid() { return linspace(0, two_pi, 401); }

BandStructure bands_open_column(const LatticeSpec& spec, const std::vector<double>& k_grid,
                                int threads) {
    spec.validate();
    if (spec.col_boundary != Boundary::open)
        throw DomainError("bands_open_column: column boundary must be open");
    BandStructure b;
    b.k_grid = k_grid;
    const int nk = static_cast<int>(k_grid.size()), W = spec.W;
    b.bands.resize(nk, W);
    b.edge_weight.resize(nk, W);
    Eigen::VectorXd m(W);
    for (int i = 0; i < W; ++i) m(i) = spec.m_of(i);
    parallel_for(nk, threads, [&](std::size_t q) {
        EigenSystem es = eig_hermitian(build_quasimomentum(k_grid[q], spec));
        for (int s = 0; s < W; ++s) {
            b.bands(q, s) = es.values(s);
            b.edge_weight(q, s) = es.vectors.col(s).cwiseAbs2().dot(m);
        }
    });
    return b;
}

ButterflySpectrum butterfly(const LatticeSpec& spec, const std::vector<double>& gamma_grid,
                            int threads) {
    spec.validate();
    ButterflySpectrum out;
    out.gamma_grid = gamma_grid;
    out.levels.resize(gamma_grid.size(), spec.dim());
    parallel_for(gamma_grid.size(), threads, [&](std::size_t q) {
        LatticeSpec s = spec;
        s.gamma = wrap_angle(gamma_grid[q]);
        Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(build_real_space(s),
                                                              Eigen::EigenvaluesOnly);
        out.levels.row(q) = solver.eigenvalues().transpose();
    });
    return out;
}

PerturbativePair threeleg_perturbative(double gamma, double g_x, double g_y) {
    double c = 1 - std::cos(gamma);
    // gamma = +-pi is fine here, only the time-reversal point gamma = 0 is singular
    if (!std::isfinite(gamma) || std::abs(gamma) > pi || c <= 1e-12)
        throw DomainError("threeleg_perturbative: requires 0 < |gamma| <= pi");
    return {-2 * g_x - (g_y * g_y / g_x) / c, -2 * g_x + (g_y * g_y / (2 * g_x)) / c};
}

PerturbativePair threeleg_perturbative_rederived(double gamma, double g_x, double g_y) {
    PerturbativePair p = threeleg_perturbative(gamma, g_x, g_y);
    p.Egamma = -2 * g_x - (g_y * g_y / (2 * g_x)) / (1 - std::cos(gamma));
    return p;
}

std::array<double, 3> threeleg_strong_coupling(double k_x, double gamma, double g_x,
                                               double g_y) {
    double em = band_eps(k_x - gamma, g_x), e0 = band_eps(k_x, g_x), ep = band_eps(k_x + gamma, g_x);
    double outer = 0.25 * em + 0.5 * e0 + 0.25 * ep;
    double r2 = std::sqrt(2.0) * g_y;
    return {-r2 + outer, 0.5 * em + 0.5 * ep, r2 + outer};
}

Eigen::MatrixXd gap_map(const LatticeSpec& spec, const std::vector<double>& gamma_grid,
                        const std::vector<double>& K_grid, int threads) {
    if (!spec.is_open()) throw DomainError("gap_map: requires open boundaries");
    if (spec.dim() < 2) throw DomainError("gap_map: needs at least two sites");
    const std::size_t ng = gamma_grid.size(), nK = K_grid.size();
    Eigen::MatrixXd out(ng, nK);
    parallel_for(ng * nK, threads, [&](std::size_t c) {
        LatticeSpec s = spec;
        s.gamma = wrap_angle(gamma_grid[c / nK]);
        s.g_y = K_grid[c % nK] * spec.g_x;
        Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(build_real_space(s),
                                                              Eigen::EigenvaluesOnly);
        out(c / nK, c % nK) = solver.eigenvalues()(1) - solver.eigenvalues()(0);
    });
    return out;
}

}  // namespace harper
