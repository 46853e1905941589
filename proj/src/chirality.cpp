#include "harper/chirality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "harper/errors.hpp"
#include "harper/parallel.hpp"
#include "harper/spectra.hpp"
#include "harper/units.hpp"

namespace harper {

namespace {

// One correction step for eigenpair 0: residual in long double, solved in the
// eigenbasis. Small currents are differences of O(eps ||H|| / gap) vector
// errors otherwise.
void refine_lowest(const HermitianMatrix& H, const EigenSystem& es, Eigen::VectorXcd& psi,
                   double& omega) {
    using lcplx = std::complex<long double>;
    const Eigen::Index n = psi.size();
    std::vector<lcplx> Hpsi(n, 0);
    long double num = 0, den = 0;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            if (H(a, b) == cplx(0)) continue;
            Hpsi[a] += lcplx(H(a, b)) * lcplx(psi(b));
        }
        num += (std::conj(lcplx(psi(a))) * Hpsi[a]).real();
        den += std::norm(lcplx(psi(a)));
    }
    long double lambda = num / den;
    Eigen::VectorXcd r(n);
    for (Eigen::Index a = 0; a < n; ++a)
        r(a) = cplx(Hpsi[a] - lambda * lcplx(psi(a)));
    Eigen::VectorXcd c = es.vectors.adjoint() * r;
    Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index j = 1; j < n; ++j)
        delta -= es.vectors.col(j) * (c(j) / (es.values(j) - static_cast<double>(lambda)));
    psi += delta;
    psi /= psi.norm();
    omega = static_cast<double>(lambda);
}

}  // namespace

GroundState ground_state(const LatticeSpec& spec) {
    if (!spec.is_open()) throw DomainError("ground_state: requires open boundaries");
    HermitianMatrix H = build_real_space(spec);
    EigenSystem es = eig_hermitian(H);
    GroundState g;
    g.omega1 = es.values(0);
    g.psi = es.vectors.col(0);
    if (es.values.size() > 1 && es.values(1) - es.values(0) > 1e-10 * spec.coupling_scale())
        refine_lowest(H, es, g.psi, g.omega1);
    if (es.values.size() > 1 && es.values(1) - es.values(0) <= 1e-10 * spec.coupling_scale()) {
        g.degenerate = true;
        auto recombine = [&spec](const Eigen::VectorXcd& v) {
            Eigen::VectorXcd r(v.size());
            for (int i = 0; i < spec.W; ++i)
                for (int j = 0; j < spec.L; ++j)
                    r(spec.flat(j, i)) = v(spec.flat(j, i)) + std::conj(v(spec.flat(j, spec.W - 1 - i)));
            return r;
        };
        Eigen::VectorXcd r = recombine(g.psi);
        if (r.norm() < 1e-6) r = recombine(cplx(0, 1) * g.psi);
        g.psi = r / r.norm();
    }
    return g;
}

CurrentPattern bond_currents(const Eigen::VectorXcd& psi, const LatticeSpec& spec) {
    if (psi.size() != spec.dim()) throw ValidationError("bond_currents: state size mismatch");
    CurrentPattern p;
    p.L = spec.L;
    p.W = spec.W;
    p.scale = spec.coupling_scale();
    p.row = Eigen::MatrixXd::Zero(spec.W, std::max(spec.L - 1, 0));
    p.col = Eigen::MatrixXd::Zero(std::max(spec.W - 1, 0), spec.L);
    for (int i = 0; i < spec.W; ++i)
        for (int j = 0; j + 1 < spec.L; ++j) {
            cplx z = -spec.g_x * psi(spec.flat(j, i)) * std::conj(psi(spec.flat(j + 1, i)));
            p.row(i, j) = 2 * z.imag();
        }
    for (int j = 0; j < spec.L; ++j) {
        cplx g = spec.g_y * std::exp(cplx(0, spec.gamma * spec.n_of(j)));
        for (int i = 0; i + 1 < spec.W; ++i) {
            cplx z = g * psi(spec.flat(j, i)) * std::conj(psi(spec.flat(j, i + 1)));
            p.col(i, j) = 2 * z.imag();
        }
    }
    return p;
}

double max_abs_current(const CurrentPattern& p) {
    double m = 0;
    if (p.row.size()) m = std::max(m, p.row.cwiseAbs().maxCoeff());
    if (p.col.size()) m = std::max(m, p.col.cwiseAbs().maxCoeff());
    return m;
}

double max_divergence(const CurrentPattern& p) {
    double worst = 0;
    for (int i = 0; i < p.W; ++i)
        for (int j = 0; j < p.L; ++j) {
            double out = 0;
            if (j + 1 < p.L) out += p.row(i, j);
            if (j > 0) out -= p.row(i, j - 1);
            if (i + 1 < p.W) out += p.col(i, j);
            if (i > 0) out -= p.col(i - 1, j);
            worst = std::max(worst, std::abs(out));
        }
    return worst;
}

double chiral_current(const CurrentPattern& p) {
    if (p.W != 3) throw DomainError("chiral_current: defined for width 3 only");
    return p.row.row(2).sum() - p.row.row(0).sum();
}

double edge_mean_current(const CurrentPattern& p, int i) {
    if (i < 0 || i >= p.W) throw DomainError("edge_mean_current: row out of range");
    return p.row.row(i).sum() / p.L;
}

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// calls f(ccw_side, cw_side, current) for every bond; a positive current runs
// counter-clockwise around ccw_side
template <class F>
void for_each_bond(const CurrentPattern& p, int exterior, F&& f) {
    const int PL = p.L - 1, PW = p.W - 1;
    auto plaq = [&](int i, int j) {
        return (i >= 0 && i < PW && j >= 0 && j < PL) ? i * PL + j : exterior;
    };
    for (int i = 0; i < p.W; ++i)
        for (int j = 0; j + 1 < p.L; ++j) f(plaq(i, j), plaq(i - 1, j), p.row(i, j));
    for (int i = 0; i + 1 < p.W; ++i)
        for (int j = 0; j < p.L; ++j) f(plaq(i, j - 1), plaq(i, j), p.col(i, j));
}

}  // namespace

int count_vortices(const CurrentPattern& p, double tol_rel) {
    if (p.L < 2 || p.W < 2) return 0;
    double imax = max_abs_current(p);
    if (imax <= 1e-12 * p.scale) return 0;
    const double thr = tol_rel * imax;
    const int exterior = (p.L - 1) * (p.W - 1);
    DisjointSet ds(exterior + 1);
    for_each_bond(p, exterior, [&](int a, int b, double I) {
        if (std::abs(I) <= thr) ds.unite(a, b);
    });
    std::vector<char> pos(exterior + 1, 0), neg(exterior + 1, 0);
    for_each_bond(p, exterior, [&](int a, int b, double I) {
        if (std::abs(I) <= thr) return;
        int ra = ds.find(a), rb = ds.find(b);
        if (ra == rb) return;
        (I > 0 ? pos : neg)[ra] = 1;
        (I > 0 ? neg : pos)[rb] = 1;
    });
    int ext = ds.find(exterior), count = 0;
    for (int r = 0; r < exterior; ++r)
        if (ds.find(r) == r && r != ext && (pos[r] != neg[r])) ++count;
    return count;
}

CurrentPattern normalized(const CurrentPattern& p, double tol_rel) {
    CurrentPattern q = p;
    double thr = tol_rel * max_abs_current(p);
    auto unit = [thr](double I) { return std::abs(I) <= thr ? 0.0 : (I > 0 ? 1.0 : -1.0); };
    q.row = p.row.unaryExpr(unit);
    q.col = p.col.unaryExpr(unit);
    return q;
}

Thresholds find_thresholds(const Eigen::MatrixXi& vortex, const std::vector<double>& gamma_grid,
                           const std::vector<double>& K_grid) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Thresholds t{nan, nan};
    const int ng = static_cast<int>(gamma_grid.size()), nK = static_cast<int>(K_grid.size());
    std::vector<int> order(nK);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return K_grid[a] < K_grid[b]; });
    for (int r = nK - 1; r >= 0; --r) {
        int k = order[r];
        bool ok = true;
        for (int g = 0; g < ng; ++g) ok = ok && vortex(g, k) <= 1;
        if (!ok) break;
        t.K_c = K_grid[k];
    }
    for (int g = 0; g < ng; ++g)
        for (int k = 0; k < nK; ++k)
            if (vortex(g, k) > 1) {
                double a = std::abs(gamma_grid[g]);
                if (std::isnan(t.gamma_c) || a < t.gamma_c) t.gamma_c = a;
            }
    return t;
}

PhaseMap vortex_map(const LatticeSpec& spec, const std::vector<double>& gamma_grid,
                    const std::vector<double>& K_grid, double tol_rel, int threads) {
    if (!spec.is_open()) throw DomainError("vortex_map: requires open boundaries");
    PhaseMap pm;
    pm.gamma_grid = gamma_grid;
    pm.K_grid = K_grid;
    pm.tol_rel = tol_rel;
    const std::size_t ng = gamma_grid.size(), nK = K_grid.size();
    pm.vortex.resize(ng, nK);
    pm.chiral.resize(ng, nK);
    parallel_for(ng * nK, threads, [&](std::size_t c) {
        LatticeSpec s = spec;
        s.gamma = wrap_angle(gamma_grid[c / nK]);
        s.g_y = K_grid[c % nK] * spec.g_x;
        CurrentPattern p = bond_currents(ground_state(s), s);
        pm.vortex(c / nK, c % nK) = count_vortices(p, tol_rel);
        pm.chiral(c / nK, c % nK) =
            s.W == 3 ? chiral_current(p) : std::numeric_limits<double>::quiet_NaN();
    });
    Thresholds t = find_thresholds(pm.vortex, gamma_grid, K_grid);
    pm.K_c = t.K_c;
    pm.gamma_c = t.gamma_c;
    return pm;
}

Eigen::MatrixXcd quasimomentum_distribution(const Eigen::VectorXcd& psi, const LatticeSpec& spec,
                                            const std::vector<double>& k_grid) {
    if (psi.size() != spec.dim()) throw ValidationError("quasimomentum_distribution: size mismatch");
    const int nk = static_cast<int>(k_grid.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(spec.W, nk);
    const double norm = 1.0 / std::sqrt(double(spec.L));
    for (int q = 0; q < nk; ++q)
        for (int i = 0; i < spec.W; ++i) {
            cplx s = 0;
            for (int j = 0; j < spec.L; ++j) {
                double n = spec.n_of(j);
                s += std::exp(cplx(0, -(spec.gamma * spec.m_of(i) * n + k_grid[q] * n))) *
                     psi(spec.flat(j, i));
            }
            out(i, q) = norm * s;
        }
    return out;
}

Derivatives finite_differences(const std::vector<double>& v, double h) {
    const int n = static_cast<int>(v.size());
    if (n < 5) throw DomainError("finite_differences: need at least 5 points");
    Derivatives d;
    d.value = v;
    d.d1.resize(n);
    d.d2.resize(n);
    for (int i = 1; i + 1 < n; ++i) {
        d.d1[i] = (v[i + 1] - v[i - 1]) / (2 * h);
        d.d2[i] = (v[i + 1] - 2 * v[i] + v[i - 1]) / (h * h);
    }
    d.d1[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h);
    d.d1[n - 1] = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * h);
    d.d2[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / (h * h);
    d.d2[n - 1] = (2 * v[n - 1] - 5 * v[n - 2] + 4 * v[n - 3] - v[n - 4]) / (h * h);
    return d;
}

Derivatives ground_energy_derivatives(const LatticeSpec& spec, const std::vector<double>& K_grid,
                                      double gamma, int threads) {
    const int n = static_cast<int>(K_grid.size());
    if (n < 5) throw DomainError("ground_energy_derivatives: need at least 5 K points");
    double h = K_grid[1] - K_grid[0];
    for (int i = 1; i < n; ++i)
        if (std::abs((K_grid[i] - K_grid[i - 1]) - h) > 1e-9 * std::abs(h))
            throw DomainError("ground_energy_derivatives: K grid must be uniform");
    std::vector<double> w(n);
    parallel_for(n, threads, [&](std::size_t i) {
        LatticeSpec s = spec;
        s.gamma = wrap_angle(gamma);
        s.g_y = K_grid[i] * spec.g_x;
        Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(build_real_space(s),
                                                              Eigen::EigenvaluesOnly);
        w[i] = solver.eigenvalues()(0);
    });
    return finite_differences(w, h);
}

double max_jump_ratio(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    if (n < 4) return 0;
    std::vector<double> d(n - 1);
    double vmax = 0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    for (int i = 0; i + 1 < n; ++i) d[i] = std::abs(v[i + 1] - v[i]);
    const double floor = 1e-9 * vmax + std::numeric_limits<double>::min();
    double worst = 0;
    for (int i = 1; i + 2 < n; ++i)
        worst = std::max(worst, d[i] / std::max({d[i - 1], d[i + 1], floor}));
    return worst;
}

double edge_current_asymptotic(const LatticeSpec& spec) {
    if (spec.W != 3) throw DomainError("edge_current_asymptotic: width must be 3");
    EigenSystem es = eig_hermitian(build_quasimomentum(0.0, spec));
    double e = std::norm(es.vectors(0, 0));
    return -(2 * spec.g_x / spec.L) * e * std::sin(spec.gamma);
}

}  // namespace harper
