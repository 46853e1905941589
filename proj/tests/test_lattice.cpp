#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "harper/errors.hpp"
#include "harper/lattice.hpp"
#include "harper/spectra.hpp"
#include "harper/units.hpp"

using namespace harper;

namespace {

LatticeSpec make(int L, int W, double gx, double gy, double gamma) {
    LatticeSpec s;
    s.L = L;
    s.W = W;
    s.g_x = gx;
    s.g_y = gy;
    s.gamma = gamma;
    return s;
}

std::vector<double> sorted_eigs(const HermitianMatrix& H) {
    auto v = eig_hermitian(H).values;
    return {v.data(), v.data() + v.size()};
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("smallest real-space matrices") {
    auto H = build_real_space(make(2, 1, 1.0, 0.0, 0));
    REQUIRE(H.rows() == 2);
    CHECK(H(0, 0) == cplx(0));
    CHECK(H(0, 1) == cplx(-1));
    CHECK(H(1, 0) == cplx(-1));

    auto s = make(1, 2, 1.0, 0.7, 1.1);
    auto V = build_real_space(s);
    CHECK(std::abs(V(s.flat(0, 1), s.flat(0, 0)) - cplx(0.7)) < 1e-15);

    auto t = make(3, 2, 1.0, 0.7, pi / 2);
    auto U = build_real_space(t);
    // column j = 2 is n = +1
    CHECK(std::abs(U(t.flat(2, 1), t.flat(2, 0)) - cplx(0, 0.7)) < 1e-15);
    CHECK(std::abs(U(t.flat(0, 1), t.flat(0, 0)) - cplx(0, -0.7)) < 1e-15);
}

TEST_CASE("real-space matrix is Hermitian for all boundaries") {
    for (auto rb : {Boundary::open, Boundary::periodic})
        for (auto cb : {Boundary::open, Boundary::periodic})
            for (double g : {0.0, 0.3, -2.2, pi}) {
                auto s = make(7, 4, 1.0, 1.3, g);
                s.row_boundary = rb;
                s.col_boundary = cb;
                CHECK(is_hermitian(build_real_space(s)));
            }
}

TEST_CASE("time-reversal points give a real matrix") {
    for (double g : {0.0, pi}) {
        auto H = build_real_space(make(9, 3, 1.0, 0.8, g));
        CHECK((H - H.conjugate()).norm() <= 1e-14 * H.norm());
    }
    auto H = build_real_space(make(9, 3, 1.0, 0.8, 0.7));
    CHECK((H - H.conjugate()).norm() > 0.1);
}

TEST_CASE("spectrum is invariant under flux reversal") {
    for (double g : {0.3, pi / 2, 2.5}) {
        auto a = sorted_eigs(build_real_space(make(9, 3, 1.0, 0.9, g)));
        auto b = sorted_eigs(build_real_space(make(9, 3, 1.0, 0.9, -g)));
        CHECK(max_diff(a, b) < 1e-12);
    }
}

TEST_CASE("decoupled rows are W copies of an open chain") {
    const int L = 11, W = 4;
    auto ev = sorted_eigs(build_real_space(make(L, W, 1.0, 0.0, 0.9)));
    std::vector<double> want;
    for (int w = 0; w < W; ++w)
        for (int j = 1; j <= L; ++j) want.push_back(-2 * std::cos(pi * j / (L + 1)));
    std::sort(want.begin(), want.end());
    CHECK(max_diff(ev, want) < 1e-12);
}

TEST_CASE("quasimomentum matrix examples") {
    auto s = make(1, 3, 1.0, 1.0, pi / 2);
    auto H = build_quasimomentum(0, s);
    CHECK(H(0, 0).real() == doctest::Approx(0).scale(1));
    CHECK(H(1, 1).real() == doctest::Approx(-2));
    CHECK(H(2, 2).real() == doctest::Approx(0).scale(1));
    CHECK(H(0, 1) == cplx(1));

    auto one = make(1, 1, 1.3, 0, 0);
    for (double k : {-2.0, 0.0, 0.4})
        CHECK(build_quasimomentum(k, one)(0, 0).real() == doctest::Approx(band_eps(k, 1.3)));

    auto free = make(1, 3, 1.0, 0.0, 0.8);
    for (double k : {-1.0, 0.0, 0.5, 2.0}) {
        std::vector<double> want = {band_eps(k - 0.8, 1), band_eps(k, 1), band_eps(k + 0.8, 1)};
        std::sort(want.begin(), want.end());
        CHECK(max_diff(sorted_eigs(build_quasimomentum(k, free)), want) < 1e-14);
    }
}

TEST_CASE("quasimomentum blocks reproduce the row-periodic lattice") {
    // gamma L must be a multiple of 2 pi for the row wrap to close
    struct Case { int L, W, p; double K; };
    for (auto c : {Case{12, 3, 3, 0.7}, Case{9, 3, 2, 1.4}, Case{10, 5, 1, 0.5}, Case{8, 3, 3, 2.0}}) {
        double g = two_pi * c.p / c.L;
        auto s = make(c.L, c.W, 1.0, c.K, wrap_angle(g));
        s.row_boundary = Boundary::periodic;
        auto real = sorted_eigs(build_real_space(s));
        std::vector<double> blocks;
        for (int q = 0; q < c.L; ++q) {
            auto e = sorted_eigs(build_quasimomentum(two_pi * q / c.L, s));
            blocks.insert(blocks.end(), e.begin(), e.end());
        }
        std::sort(blocks.begin(), blocks.end());
        CHECK(max_diff(real, blocks) < 1e-12);
    }
}

TEST_CASE("Bloch matrix examples and periodicity") {
    auto flat = make(1, 1, 1.0, 0.6, 0);
    for (double kx : {-1.0, 0.3})
        for (double ky : {0.0, 2.0})
            CHECK(build_bloch(kx, ky, flat, 0, 1)(0, 0).real() ==
                  doctest::Approx(-2 * std::cos(kx) + 1.2 * std::cos(ky)));

    auto s = make(1, 1, 1.0, 1.0, two_pi / 5);
    CHECK(std::abs(build_bloch(0, 0, s, 1, 5).trace()) < 1e-14);
    for (double kx : {-0.5, 0.2, 1.0})
        for (double ky : {-2.0, 0.7}) {
            auto H = build_bloch(kx, ky, s, 1, 5);
            CHECK(is_hermitian(H));
            auto e = sorted_eigs(H);
            CHECK(max_diff(e, sorted_eigs(build_bloch(kx + two_pi / 5, ky, s, 1, 5))) < 1e-12);
            CHECK(max_diff(e, sorted_eigs(build_bloch(kx, ky + two_pi, s, 1, 5))) < 1e-12);
        }
}

TEST_CASE("Bloch derivatives match finite differences") {
    auto s = make(1, 1, 1.0, 0.8, two_pi / 5);
    const double h = 1e-6, kx = 0.13, ky = -0.7;
    HermitianMatrix fx = (build_bloch(kx + h, ky, s, 1, 5) - build_bloch(kx - h, ky, s, 1, 5)) / (2 * h);
    HermitianMatrix fy = (build_bloch(kx, ky + h, s, 1, 5) - build_bloch(kx, ky - h, s, 1, 5)) / (2 * h);
    CHECK((fx - bloch_dkx(kx, s, 1, 5)).norm() < 1e-7);
    CHECK((fy - bloch_dky(ky, s, 1, 5)).norm() < 1e-7);
}

TEST_CASE("Bloch flux must match P/Q") {
    auto s = make(1, 1, 1.0, 1.0, 0.9);
    CHECK_THROWS_AS(build_bloch(0, 0, s, 1, 5), DomainError);
    s.gamma = two_pi / 5;
    CHECK_THROWS_AS(build_bloch(0, 0, s, 2, 10), DomainError);
}

TEST_CASE("lattice validation") {
    auto s = make(0, 3, 1, 1, 0);
    CHECK_THROWS_AS(build_real_space(s), ValidationError);
    s = make(3, 3, 1, 1, -pi);
    CHECK_THROWS_AS(build_real_space(s), ValidationError);
    CHECK(wrap_angle(-pi) == doctest::Approx(pi));
    CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
}
