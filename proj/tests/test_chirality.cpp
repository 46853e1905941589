#include <doctest.h>

#include <cmath>
#include <random>

#include "harper/chirality.hpp"
#include "harper/errors.hpp"
#include "harper/lattice.hpp"
#include "harper/spectra.hpp"
#include "harper/units.hpp"

using namespace harper;

namespace {

LatticeSpec ladder(int L, int W, double K, double gamma) {
    LatticeSpec s;
    s.L = L;
    s.W = W;
    s.g_x = mhz(4);
    s.g_y = K * s.g_x;
    s.gamma = gamma;
    return s;
}

// net outflow of every site, straight from the pattern
Eigen::VectorXd outflow(const CurrentPattern& p, const LatticeSpec& s) {
    Eigen::VectorXd o = Eigen::VectorXd::Zero(s.dim());
    for (int i = 0; i < s.W; ++i)
        for (int j = 0; j + 1 < s.L; ++j) {
            o(s.flat(j, i)) += p.row(i, j);
            o(s.flat(j + 1, i)) -= p.row(i, j);
        }
    for (int i = 0; i + 1 < s.W; ++i)
        for (int j = 0; j < s.L; ++j) {
            o(s.flat(j, i)) += p.col(i, j);
            o(s.flat(j, i + 1)) -= p.col(i, j);
        }
    return o;
}

const double gammas[] = {-pi / 2, 0.3 * pi, 0.8 * pi};
const double Ks[] = {0.1, 0.6, 1.5};

}  // namespace

TEST_CASE("ground state examples") {
    auto g0 = ground_state(ladder(9, 3, 0.8, 0));
    CHECK(g0.psi.imag().norm() < 1e-12);

    auto one = ground_state(ladder(1, 1, 0, 0));
    CHECK(one.psi.size() == 1);
    CHECK(std::abs(one.psi(0) - cplx(1)) < 1e-15);
    CHECK(one.omega1 == 0.0);

    auto s = ladder(9, 3, 100, pi / 3);
    auto g = ground_state(s);
    double w[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 9; ++j) w[i] += std::norm(g.psi(s.flat(j, i)));
    CHECK(w[0] == doctest::Approx(0.25).epsilon(0.01));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(0.01));
    CHECK(w[2] == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("bond currents obey continuity for any state") {
    // d|psi_a|^2/dt = 2 Im(conj(psi_a) (H psi)_a) must equal minus the outflow
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    auto s = ladder(6, 4, 0.9, 0.7);
    auto H = build_real_space(s);
    Eigen::VectorXcd psi(s.dim());
    for (int a = 0; a < s.dim(); ++a) psi(a) = cplx(d(rng), d(rng));
    psi.normalize();
    Eigen::VectorXcd Hpsi = H * psi;
    auto p = bond_currents(psi, s);
    auto o = outflow(p, s);
    for (int a = 0; a < s.dim(); ++a)
        CHECK(-o(a) == doctest::Approx(2 * (std::conj(psi(a)) * Hpsi(a)).imag()).scale(s.g_x));
}

TEST_CASE("ground-state current invariants over the sample matrix") {
    for (double g : gammas)
        for (double K : Ks) {
            auto s = ladder(17, 3, K, g);
            auto p = bond_currents(ground_state(s), s);
            double imax = max_abs_current(p);
            REQUIRE(imax > 0);
            CHECK(max_divergence(p) <= 1e-12 * imax);
            CHECK(p.row.row(1).cwiseAbs().maxCoeff() <= 1e-12 * imax);

            auto r = ladder(17, 3, K, -g);
            auto q = bond_currents(ground_state(r), r);
            CHECK((p.row + q.row).cwiseAbs().maxCoeff() <= 1e-10 * imax);
            CHECK((p.col + q.col).cwiseAbs().maxCoeff() <= 1e-10 * imax);
            CHECK(count_vortices(p) == count_vortices(q));
        }
}

TEST_CASE("every eigenstate is divergence free") {
    auto s = ladder(9, 4, 0.7, 0.9);
    auto es = eig_hermitian(build_real_space(s));
    for (int j = 0; j < s.dim(); ++j) {
        if (es.degenerate[j]) continue;
        auto p = bond_currents(es.vectors.col(j), s);
        CHECK(max_divergence(p) <= 1e-12 * std::max(max_abs_current(p), s.g_x));
    }
}

TEST_CASE("no currents without flux") {
    auto s = ladder(17, 3, 0.5, 0);
    auto p = bond_currents(ground_state(s), s);
    CHECK(max_abs_current(p) <= 1e-12 * s.g_x);
    CHECK(count_vortices(p) == 0);
    CHECK(chiral_current(p) == doctest::Approx(0).scale(1e-12 * s.g_x));
}

TEST_CASE("chiral current is odd in flux and vanishes at pi") {
    for (double g : {pi, -pi + 1e-15}) {
        auto s = ladder(17, 3, 0.5, wrap_angle(g));
        CHECK(std::abs(chiral_current(bond_currents(ground_state(s), s))) <= 1e-10 * s.g_x);
    }
    for (double g : {0.2, 1.0, 2.2})
        for (double K : {0.3, 1.2}) {
            auto a = ladder(17, 3, K, g), b = ladder(17, 3, K, -g);
            double ia = chiral_current(bond_currents(ground_state(a), a));
            double ib = chiral_current(bond_currents(ground_state(b), b));
            CHECK(std::abs(ia) > 0);
            CHECK(ib == doctest::Approx(-ia).epsilon(1e-9));
        }
}

TEST_CASE("vortex counts of the three-leg ladder") {
    const int want[] = {7, 4, 2, 1};
    const double K[] = {0.1, 0.2, 0.4, 0.7};
    for (int c = 0; c < 4; ++c) {
        auto neg = ladder(17, 3, K[c], -pi / 2), pos = ladder(17, 3, K[c], pi / 2);
        auto pn = bond_currents(ground_state(neg), neg);
        auto pp = bond_currents(ground_state(pos), pos);
        CHECK(count_vortices(pn) == want[c]);
        CHECK(count_vortices(pp) == want[c]);
        CHECK(count_vortices(normalized(pn)) == want[c]);
        // directions reverse
        CHECK(pn.row(0, 8) * pp.row(0, 8) < 0);
    }
}

TEST_CASE("normalised arrows keep the vortex count") {
    for (double g : {0.2 * pi, 0.5 * pi, 0.9 * pi})
        for (double K : {0.15, 0.3, 0.9}) {
            auto s = ladder(17, 3, K, g);
            auto p = bond_currents(ground_state(s), s);
            auto n = normalized(p);
            CHECK(count_vortices(n) == count_vortices(p));
            for (int i = 0; i < n.row.rows(); ++i)
                for (int j = 0; j < n.row.cols(); ++j) CHECK(std::abs(n.row(i, j)) <= 1.0);
        }
}

TEST_CASE("thresholds from a synthetic map") {
    std::vector<double> g = {-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3};
    std::vector<double> K = {0.1, 0.2, 0.3, 0.4};
    Eigen::MatrixXi v = Eigen::MatrixXi::Ones(7, 4);
    v(0, 0) = v(6, 0) = 3;
    v(1, 1) = v(5, 1) = 2;
    v(3, 0) = 0;
    auto t = find_thresholds(v, g, K);
    CHECK(t.K_c == doctest::Approx(0.3));
    CHECK(t.gamma_c == doctest::Approx(0.2));
}

TEST_CASE("small vortex map is symmetric about zero flux") {
    auto g = linspace(-pi, pi, 21);
    auto K = linspace(0.1, 1.0, 7);
    auto m = vortex_map(ladder(17, 3, 1, 0), g, K, default_vortex_tol, 2);
    for (int a = 0; a < 21; ++a)
        for (int b = 0; b < 7; ++b) CHECK(m.vortex(a, b) == m.vortex(20 - a, b));
    for (int b = 0; b < 7; ++b) CHECK(m.vortex(10, b) == 0);
}

TEST_CASE("quasimomentum distribution") {
    auto s = ladder(17, 3, 0.3, 0.4 * pi);
    Eigen::VectorXcd u(s.dim());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 17; ++j)
            u(s.flat(j, i)) = std::exp(cplx(0, s.gamma * s.m_of(i) * s.n_of(j))) / std::sqrt(51.0);
    auto k = linspace(-pi, pi, 101);
    auto d = quasimomentum_distribution(u, s, k);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(d(i, 50)) == doctest::Approx(1 / std::sqrt(3.0)));
        // the geometric sum vanishes at the nonzero multiples of 2 pi / L
        auto z = quasimomentum_distribution(u, s, {two_pi / 17, -4 * two_pi / 17});
        CHECK(std::abs(z(i, 0)) < 1e-14);
        CHECK(std::abs(z(i, 1)) < 1e-14);
    }
    for (double g : {0.4 * pi, 0.6 * pi}) {
        auto t = ladder(17, 3, 0.3, g);
        auto q = quasimomentum_distribution(ground_state(t).psi, t, k);
        Eigen::Index at[3];
        for (int i = 0; i < 3; ++i) q.row(i).cwiseAbs().maxCoeff(&at[i]);
        CHECK(at[1] == 50);
        // the outer legs of a finite chain peak slightly off zero, mirrored
        CHECK(at[0] + at[2] == 100);
        CHECK(std::abs(at[0] - 50) <= 2);
    }
}

TEST_CASE("finite differences are exact on quadratics") {
    std::vector<double> v;
    const double h = 0.1;
    for (int i = 0; i < 20; ++i) {
        double x = i * h;
        v.push_back(3 * x * x - 2 * x + 1);
    }
    auto d = finite_differences(v, h);
    for (int i = 0; i < 20; ++i) {
        CHECK(d.d1[i] == doctest::Approx(6 * i * h - 2));
        CHECK(d.d2[i] == doctest::Approx(6));
    }
    CHECK_THROWS_AS(finite_differences({1, 2, 3}, h), DomainError);
}

TEST_CASE("jump ratio separates smooth curves from steps") {
    std::vector<double> smooth, step;
    for (int i = 0; i < 100; ++i) {
        smooth.push_back(std::sin(0.05 * i));
        step.push_back(std::sin(0.05 * i) + (i >= 50 ? 1.0 : 0.0));
    }
    CHECK(max_jump_ratio(smooth) < 2);
    CHECK(max_jump_ratio(step) > 10);
}

TEST_CASE("ground energy derivatives") {
    auto s = ladder(17, 3, 0, pi / 2);
    auto K = linspace(0.0, 0.1, 11);
    auto d = ground_energy_derivatives(s, K, pi / 2);
    // three near-degenerate chain ground states split at first order in K,
    // so a finite chain has a small linear onset
    double L1 = 18, sum_c = 0, sum_s = 0, norm = 0;
    for (int j = 0; j < 17; ++j) {
        double phi = std::sin(pi * (j + 1) / L1), n = j - 8;
        norm += phi * phi;
        sum_c += phi * phi * std::cos(pi / 2 * n);
        sum_s += phi * phi * std::sin(pi / 2 * n);
    }
    double onset = -std::sqrt(2.0) * std::hypot(sum_c, sum_s) / norm * s.g_x;
    CHECK(onset < 0);
    auto fine = ground_energy_derivatives(s, linspace(0.0, 1e-3, 11), pi / 2);
    CHECK(fine.d1[0] == doctest::Approx(onset).epsilon(0.01));
    // onset matches the second-order curvature of the perturbative minimum
    double slope = -2 * s.g_x * K[5] / (1 - std::cos(pi / 2));
    CHECK(d.d1[5] == doctest::Approx(slope).epsilon(0.1));

    auto off = ladder(17, 3, 0, pi / 2);
    off.g_x = 0;
    auto z = ground_energy_derivatives(off, K, pi / 2);
    for (double x : z.d1) CHECK(x == 0.0);

    auto full = ground_energy_derivatives(s, linspace(0.05, 2.0, 391), 0.4 * pi);
    CHECK(max_jump_ratio(full.d1) <= 10);
    CHECK(max_jump_ratio(full.d2) <= 10);
}

TEST_CASE("edge current of a long ladder") {
    auto s = ladder(101, 3, 0.7, pi / 2);
    auto p = bond_currents(ground_state(s), s);
    double got = edge_mean_current(p, 0);
    CHECK(got == doctest::Approx(edge_current_asymptotic(s)).epsilon(0.05));
    CHECK(edge_current_asymptotic(ladder(101, 3, 0.7, 0)) == 0.0);
    CHECK(edge_current_asymptotic(ladder(101, 3, 0.7, -pi / 2)) ==
          doctest::Approx(-edge_current_asymptotic(s)));
}
