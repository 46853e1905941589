#include "harper/lattice.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "harper/errors.hpp"
#include "harper/units.hpp"

namespace harper {

LatticeSpec LatticeSpec::from_half(int N, int M_half, double g_x, double g_y, double gamma) {
    LatticeSpec s;
    s.L = 2 * N + 1;
    s.W = 2 * M_half + 1;
    s.g_x = g_x;
    s.g_y = g_y;
    s.gamma = gamma;
    return s;
}

double LatticeSpec::coupling_scale() const {
    double s = std::max(std::abs(g_x), std::abs(g_y));
    return s > 0 ? s : 1.0;
}

void LatticeSpec::validate() const {
    if (L < 1) throw ValidationError("lattice.L must be >= 1");
    if (W < 1) throw ValidationError("lattice.W must be >= 1");
    if (!std::isfinite(g_x) || !std::isfinite(g_y))
        throw ValidationError("lattice couplings must be finite");
    if (!std::isfinite(gamma) || gamma <= -pi || gamma > pi)
        throw ValidationError("lattice.gamma must lie in (-pi, pi]");
}

double wrap_angle(double a) {
    double r = std::remainder(a, two_pi);  // [-pi, pi]
    if (r <= -pi) r += two_pi;
    return r;
}

HermitianMatrix build_real_space(const LatticeSpec& spec) {
    spec.validate();
    const int L = spec.L, W = spec.W;
    HermitianMatrix H = HermitianMatrix::Zero(spec.dim(), spec.dim());
    auto add = [&H](int to, int from, cplx amp) {
        H(to, from) += amp;
        H(from, to) += std::conj(amp);
    };
    for (int i = 0; i < W; ++i) {
        for (int j = 0; j + 1 < L; ++j) add(spec.flat(j + 1, i), spec.flat(j, i), -spec.g_x);
        if (spec.row_boundary == Boundary::periodic && L >= 3)
            add(spec.flat(0, i), spec.flat(L - 1, i), -spec.g_x);
    }
    for (int j = 0; j < L; ++j) {
        cplx amp = spec.g_y * std::exp(cplx(0, spec.gamma * spec.n_of(j)));
        for (int i = 0; i + 1 < W; ++i) add(spec.flat(j, i + 1), spec.flat(j, i), amp);
        if (spec.col_boundary == Boundary::periodic && W >= 3)
            add(spec.flat(j, 0), spec.flat(j, W - 1), amp);
    }
    return H;
}

HermitianMatrix build_quasimomentum(double k_x, const LatticeSpec& spec) {
    spec.validate();
    if (spec.col_boundary != Boundary::open)
        throw DomainError("build_quasimomentum: column boundary must be open");
    const int W = spec.W;
    HermitianMatrix H = HermitianMatrix::Zero(W, W);
    for (int i = 0; i < W; ++i) {
        H(i, i) = band_eps(spec.gamma * spec.m_of(i) + k_x, spec.g_x);
        if (i + 1 < W) H(i, i + 1) = H(i + 1, i) = spec.g_y;
    }
    return H;
}

namespace {

void check_rational(const LatticeSpec& spec, int P, int Q) {
    if (Q < 1) throw DomainError("build_bloch: Q must be >= 1");
    if (std::gcd(std::abs(P), Q) != 1) throw DomainError("build_bloch: gcd(P, Q) must be 1");
    double d = wrap_angle(spec.gamma - two_pi * P / Q);
    if (std::abs(d) > 1e-12) {
        std::ostringstream os;
        os << "build_bloch: gamma = " << spec.gamma << " is not 2 pi " << P << "/" << Q;
        throw DomainError(os.str());
    }
}

}  // namespace

HermitianMatrix build_bloch(double k_x, double k_y, const LatticeSpec& spec, int P, int Q) {
    check_rational(spec, P, Q);
    HermitianMatrix H = HermitianMatrix::Zero(Q, Q);
    for (int q = 0; q + 1 < Q; ++q) {
        H(q, q + 1) += -spec.g_x;
        H(q + 1, q) += -spec.g_x;
    }
    cplx wrap = -spec.g_x * std::exp(cplx(0, k_x * Q));
    H(0, Q - 1) += wrap;
    H(Q - 1, 0) += std::conj(wrap);
    for (int q = 0; q < Q; ++q) H(q, q) += 2 * spec.g_y * std::cos(k_y - spec.gamma * q);
    return H;
}

HermitianMatrix bloch_dkx(double k_x, const LatticeSpec& spec, int P, int Q) {
    check_rational(spec, P, Q);
    HermitianMatrix D = HermitianMatrix::Zero(Q, Q);
    cplx d = -spec.g_x * cplx(0, Q) * std::exp(cplx(0, k_x * Q));
    D(0, Q - 1) += d;
    D(Q - 1, 0) += std::conj(d);
    return D;
}

HermitianMatrix bloch_dky(double k_y, const LatticeSpec& spec, int P, int Q) {
    check_rational(spec, P, Q);
    HermitianMatrix D = HermitianMatrix::Zero(Q, Q);
    for (int q = 0; q < Q; ++q) D(q, q) = -2 * spec.g_y * std::sin(k_y - spec.gamma * q);
    return D;
}

bool is_hermitian(const HermitianMatrix& H, double rel) {
    if (H.rows() != H.cols()) return false;
    if (!H.allFinite()) return false;
    double n = H.norm();
    return (H - H.adjoint()).norm() <= rel * (n > 0 ? n : 1.0);
}

}  // namespace harper
