#include "harper/measurement.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <unsupported/Eigen/NonLinearOptimization>

#include "harper/errors.hpp"
#include "harper/units.hpp"

namespace harper {

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1 - x * x / 6 : std::sin(x) / x; }

// maximise f on [a, b]
template <class F>
std::pair<double, double> refine_max(F f, double a, double b) {
    auto r = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, a, b, 40);
    return {r.first, -r.second};
}

void check_rates(const Eigen::VectorXd& v, const char* name) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!(v(i) >= 0)) throw ValidationError(std::string("drive.") + name + ": rates must be >= 0");
}

}  // namespace

void DriveSpec::validate() const {
    if (!(Omega > 0)) throw ValidationError("drive.Omega: must be positive");
    if (!std::isfinite(nu)) throw ValidationError("drive.nu: must be finite");
    check_rates(gamma_relax, "gamma_relax");
    check_rates(Gamma_dephase, "Gamma_dephase");
    if (gamma_relax.size() != Gamma_dephase.size())
        throw ValidationError("drive: rate vectors differ in length");
}

EffectiveRates effective_rates(const Eigen::VectorXcd& psi, const Eigen::VectorXd& gamma_relax,
                               const Eigen::VectorXd& Gamma_dephase) {
    if (psi.size() != gamma_relax.size() || psi.size() != Gamma_dephase.size())
        throw DomainError("effective_rates: state and rate vectors differ in length");
    if (std::abs(psi.squaredNorm() - 1) > 1e-9)
        throw DomainError("effective_rates: state is not normalised");
    Eigen::VectorXd w = psi.cwiseAbs2();
    return {w.dot(gamma_relax), w.dot(Gamma_dephase)};
}

double generation_fidelity(double Omega, double gamma1, double Gamma1, double t) {
    if (!(Omega > 0)) throw DomainError("generation_fidelity: Omega must be positive");
    return 0.5 * (1 - std::exp(-0.5 * (gamma1 + 0.5 * Gamma1) * t) * std::cos(2 * Omega * t));
}

double generation_fidelity_pi2(double Omega, double gamma1, double Gamma1) {
    return generation_fidelity(Omega, gamma1, Gamma1, 0.5 * pi / Omega);
}

void PopulationTrace::validate() const {
    if (times.size() != values.size()) throw ValidationError("trace: times and values differ in length");
    for (double v : values)
        if (!(std::abs(v) <= 1 + 1e-9)) throw ValidationError("trace: |value| exceeds 1");
}

double pair_decay_rate(double gamma_a, double gamma_b, double Gamma_a, double Gamma_b) {
    return 0.25 * (gamma_a + gamma_b + Gamma_a + Gamma_b);
}

double rabi_population_difference(double t, double g, double I_G, double decay) {
    if (g == 0) throw DomainError("rabi_population_difference: g must be nonzero");
    return std::exp(-decay * t) * (std::cos(2 * g * t) + std::sin(2 * g * t) * I_G / g);
}

PopulationTrace rabi_trace(const std::vector<double>& times, double g, double I_G, double decay) {
    PopulationTrace tr;
    tr.times = times;
    for (double t : times) tr.values.push_back(rabi_population_difference(t, g, I_G, decay));
    return tr;
}

PopulationTrace with_noise(const PopulationTrace& trace, double sigma, std::uint64_t seed,
                           std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0, sigma);
    PopulationTrace out = trace;
    for (double& v : out.values) v += noise(rng);
    return out;
}

namespace {

// residuals in scaled time s = |g| t; x = (I_G / g, decay / |g|)
struct RabiFunctor {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;

    const std::vector<double>& s;
    const std::vector<double>& y;
    double sign;  // sign of g

    int inputs() const { return 2; }
    int values() const { return static_cast<int>(s.size()); }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        for (std::size_t i = 0; i < s.size(); ++i) {
            double e = std::exp(-x(1) * s[i]);
            double c = std::cos(2 * s[i]), sn = sign * std::sin(2 * s[i]);
            f(i) = e * (c + sn * x(0)) - y[i];
        }
        return 0;
    }
    int df(const Eigen::VectorXd& x, Eigen::MatrixXd& J) const {
        for (std::size_t i = 0; i < s.size(); ++i) {
            double e = std::exp(-x(1) * s[i]);
            double c = std::cos(2 * s[i]), sn = sign * std::sin(2 * s[i]);
            J(i, 0) = e * sn;
            J(i, 1) = -s[i] * e * (c + sn * x(0));
        }
        return 0;
    }
};

}  // namespace

CurrentFit extract_current_fit(const PopulationTrace& trace, double g_known) {
    // no |value| <= 1 check: the model itself overshoots 1 near t = 0 when I_G != 0
    if (trace.times.size() != trace.values.size())
        throw DomainError("extract_current_fit: times and values differ in length");
    for (double v : trace.values)
        if (!std::isfinite(v)) throw DomainError("extract_current_fit: non-finite sample");
    if (g_known == 0) throw DomainError("extract_current_fit: g must be nonzero");
    const std::size_t n = trace.times.size();
    if (n < 8) throw DomainError("extract_current_fit: need at least 8 samples");
    double span = trace.times.back() - trace.times.front();
    if (span < pi / std::abs(g_known))
        throw DomainError("extract_current_fit: trace must span one Rabi period");

    const double ag = std::abs(g_known), sign = g_known > 0 ? 1 : -1;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = ag * trace.times[i];
    RabiFunctor fn{s, trace.values, sign};

    // start from the best linear fit over a few trial decays
    Eigen::VectorXd x(2);
    double best = std::numeric_limits<double>::infinity();
    for (double v : {0.0, 1e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0}) {
        double num = 0, den = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = std::exp(-v * s[i]);
            double a = e * sign * std::sin(2 * s[i]);
            num += a * (trace.values[i] - e * std::cos(2 * s[i]));
            den += a * a;
        }
        Eigen::VectorXd trial(2);
        trial << (den > 0 ? num / den : 0), v;
        Eigen::VectorXd f(n);
        fn(trial, f);
        if (f.squaredNorm() < best) {
            best = f.squaredNorm();
            x = trial;
        }
    }

    Eigen::LevenbergMarquardt<RabiFunctor> lm(fn);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.maxfev = 2000;
    auto status = lm.minimize(x);
    Eigen::VectorXd f(n);
    fn(x, f);
    CurrentFit out;
    out.residual_rms = std::sqrt(f.squaredNorm() / n);
    out.evaluations = static_cast<int>(lm.nfev);
    using namespace Eigen::LevenbergMarquardtSpace;
    if (status == ImproperInputParameters || status == TooManyFunctionEvaluation ||
        !x.allFinite()) {
        std::ostringstream os;
        os << "extract_current_fit: no convergence (status " << static_cast<int>(status)
           << ", residual rms " << out.residual_rms << ")";
        throw FitError(os.str());
    }
    Eigen::MatrixXd J(n, 2);
    fn.df(x, J);
    double s2 = n > 2 ? f.squaredNorm() / (n - 2) : 0;
    Eigen::Matrix2d cov = s2 * (J.transpose() * J).inverse();
    out.I_G = x(0) * g_known;
    out.decay = x(1) * ag;
    out.sigma_I = std::sqrt(std::max(cov(0, 0), 0.0)) * ag;
    out.sigma_decay = std::sqrt(std::max(cov(1, 1), 0.0)) * ag;
    return out;
}

PairReadout simulate_pair_readout(std::complex<double> a, std::complex<double> b) {
    const double c = std::cos(pi / 4), s = std::sin(pi / 4);
    const cplx I(0, 1);
    PairReadout r;
    r.pop_a = std::norm(a);
    r.pop_b = std::norm(b);
    // X-pi/4: exp(-i pi/4 sigma_x) on (a, b)
    r.P1 = std::norm(c * a - I * s * b);
    // Z-pi/2 first: a -> a e^{-i pi/4}, b -> b e^{i pi/4}
    cplx za = a * std::exp(-I * (pi / 4)), zb = b * std::exp(I * (pi / 4));
    r.P2 = std::norm(c * za - I * s * zb);
    return r;
}

double relative_phase(const PairReadout& r) {
    double base = 0.5 * (r.pop_a + r.pop_b);
    double th = std::atan2(r.P1 - base, r.P2 - base);
    return th <= -pi ? th + two_pi : th;
}

ReconstructedState reconstruct_eigenstate_special(const Eigen::VectorXcd& psi,
                                                  const LatticeSpec& spec, bool strict) {
    spec.validate();
    if (psi.size() != spec.dim()) throw DomainError("reconstruct_eigenstate_special: size mismatch");
    const int L = spec.L, W = spec.W, D = spec.dim();
    const double dark = 1e-12;
    ReconstructedState out;
    out.phases = Eigen::VectorXd::Zero(D);
    out.amplitudes = Eigen::VectorXcd::Zero(D);
    out.gauge = "psi(-N,-M) real and non-negative";

    std::vector<double> mag(D);
    for (int s = 0; s < D; ++s) mag[s] = std::sqrt(simulate_pair_readout(psi(s), 0).pop_a);
    auto lit = [&](int s) { return mag[s] >= dark; };
    auto where = [&](int s) {
        std::ostringstream os;
        os << "(n, m) = (" << spec.n_of(s % L) << ", " << spec.m_of(s / L) << ")";
        return os.str();
    };

    // (child, parent): left column upward, then each row left to right
    std::vector<int> order{spec.flat(0, 0)}, parent(D, -1);
    for (int i = 1; i < W; ++i) {
        order.push_back(spec.flat(0, i));
        parent[spec.flat(0, i)] = spec.flat(0, i - 1);
    }
    for (int i = 0; i < W; ++i)
        for (int j = 1; j < L; ++j) {
            order.push_back(spec.flat(j, i));
            parent[spec.flat(j, i)] = spec.flat(j - 1, i);
        }

    std::vector<bool> done(D, false);
    auto link = [&](int child, int from) {
        double d = relative_phase(simulate_pair_readout(psi(from), psi(child)));
        out.phases(child) = wrap_angle(out.phases(from) + d);
        done[child] = true;
    };

    int anchor = -1;
    for (int s : order)
        if (lit(s)) {
            anchor = s;
            break;
        }
    if (anchor < 0) throw PathError("reconstruct_eigenstate_special: state has no weight");
    if (anchor != order.front()) {
        if (strict)
            throw PathError("reconstruct_eigenstate_special: dark anchor site " + where(order.front()));
        out.gauge = "first lit site on the path, " + where(anchor) + ", real and non-negative";
    }
    done[anchor] = true;

    std::vector<int> pending;
    for (int s : order) {
        if (done[s]) continue;
        if (!lit(s)) {  // no weight, phase irrelevant
            done[s] = true;
            continue;
        }
        int p = parent[s];
        if (done[p] && lit(p)) {
            link(s, p);
            continue;
        }
        if (strict)
            throw PathError("reconstruct_eigenstate_special: dark site " + where(p) +
                            " on the accumulation path");
        pending.push_back(s);
    }

    // route around dark sites through already-phased lit neighbours
    while (!pending.empty()) {
        std::vector<int> left;
        for (int s : pending) {
            int p = parent[s];
            if (p >= 0 && done[p] && lit(p)) {
                link(s, p);
                continue;
            }
            int j = s % L, i = s / L, via = -1;
            for (auto [dj, di] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
                int jj = j + dj, ii = i + di;
                if (jj < 0 || jj >= L || ii < 0 || ii >= W) continue;
                int q = spec.flat(jj, ii);
                if (done[q] && lit(q)) {
                    via = q;
                    break;
                }
            }
            if (via < 0) {
                left.push_back(s);
                continue;
            }
            link(s, via);
            ++out.detours;
        }
        if (left.size() == pending.size())
            throw PathError("reconstruct_eigenstate_special: lit sites not connected, e.g. " +
                            where(left.front()));
        pending.swap(left);
    }
    for (int s = 0; s < D; ++s) out.amplitudes(s) = std::polar(mag[s], out.phases(s));
    return out;
}

ReconstructedState reconstruct_eigenstate_special(const LatticeSpec& spec, int j, bool strict) {
    EigenSystem es = eig_hermitian(build_real_space(spec));
    if (j < 0 || j >= spec.dim()) throw DomainError("reconstruct_eigenstate_special: bad index");
    return reconstruct_eigenstate_special(es.vectors.col(j), spec, strict);
}

double state_fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

std::vector<double> band_weight(const Eigen::VectorXcd& psi, const LatticeSpec& spec,
                                const std::vector<double>& k_grid) {
    if (psi.size() != spec.dim()) throw DomainError("band_weight: size mismatch");
    std::vector<double> P(k_grid.size(), 0);
    const double norm = 1.0 / spec.L;
    for (std::size_t q = 0; q < k_grid.size(); ++q)
        for (int i = 0; i < spec.W; ++i) {
            cplx acc = 0;
            double m = spec.m_of(i);
            for (int j = 0; j < spec.L; ++j) {
                double n = spec.n_of(j);
                acc += std::polar(1.0, -(spec.gamma * m * n + k_grid[q] * n)) * psi(spec.flat(j, i));
            }
            P[q] += std::norm(acc) * norm;
        }
    return P;
}

std::vector<BandPoint> band_points_special(const Eigen::VectorXcd& psi, double omega,
                                           const LatticeSpec& spec, int nk) {
    if (nk < 16) throw DomainError("band_points_special: need at least 16 k points");
    std::vector<BandPoint> out;
    if (spec.row_boundary == Boundary::periodic) {
        // a ring only carries k = 2 pi q / L; off that set the kernels of
        // degenerate partners interfere and shift the maxima
        std::vector<double> kr(spec.L);
        for (int q = 0; q < spec.L; ++q) kr[q] = wrap_angle(two_pi * q / spec.L);
        std::vector<double> P = band_weight(psi, spec, kr);
        double top = *std::max_element(P.begin(), P.end());
        if (!(top > 0)) return out;
        for (int q = 0; q < spec.L; ++q)
            if (P[q] >= 0.1 * top) out.push_back({kr[q], omega, P[q]});
        return out;
    }
    std::vector<double> k(nk);
    for (int q = 0; q < nk; ++q) k[q] = -pi + two_pi * q / nk;
    std::vector<double> P = band_weight(psi, spec, k);
    double top = *std::max_element(P.begin(), P.end());
    if (!(top > 0)) return out;
    const double h = two_pi / nk;
    for (int q = 0; q < nk; ++q) {
        double l = P[(q + nk - 1) % nk], r = P[(q + 1) % nk];
        if (P[q] < 0.1 * top || P[q] < l || P[q] <= r) continue;
        auto f = [&](double x) { return band_weight(psi, spec, {x})[0]; };
        auto [kk, w] = refine_max(f, k[q] - h, k[q] + h);
        out.push_back({wrap_angle(kk), omega, w});
    }
    return out;
}

std::vector<BandPoint> band_points_special(const LatticeSpec& spec, int j, int nk) {
    EigenSystem es = eig_hermitian(build_real_space(spec));
    if (j < 0 || j >= spec.dim()) throw DomainError("band_points_special: bad index");
    return band_points_special(es.vectors.col(j), es.values(j), spec, nk);
}

double feature_function(const Eigen::VectorXd& levels, double T, double omega) {
    double f = 0;
    for (Eigen::Index j = 0; j < levels.size(); ++j) {
        double s = sinc(0.5 * (omega - levels(j)) * T);
        f += s * s;
    }
    double s0 = sinc(0.5 * omega * T);
    return 0.5 * (f + s0 * s0);
}

namespace {

Eigen::VectorXcd window_weights(const EigenSystem& es, double T, double omega) {
    Eigen::VectorXcd c(es.values.size());
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        double x = 0.5 * (omega - es.values(j)) * T;
        c(j) = std::polar(sinc(x), x);
    }
    return c;
}

}  // namespace

Eigen::VectorXcd windowed_state(const EigenSystem& es, int site, double T, double omega) {
    Eigen::VectorXcd c = window_weights(es, T, omega);
    Eigen::VectorXcd w = es.vectors.row(site).conjugate().transpose().cwiseProduct(c);
    return es.vectors * w / std::sqrt(2.0);
}

Eigen::VectorXcd fictitious_eigenstate(const EigenSystem& es, double T, double omega) {
    Eigen::VectorXcd c = window_weights(es, T, omega);
    // column s is |psi~_s(omega)>
    Eigen::MatrixXcd A = es.vectors * c.asDiagonal() * es.vectors.adjoint() / std::sqrt(2.0);
    Eigen::VectorXd M = 2 * A.colwise().norm().transpose();
    Eigen::Index ref = 0;
    M.maxCoeff(&ref);
    Eigen::VectorXcd E = Eigen::VectorXcd::Zero(A.rows());
    for (Eigen::Index s = 0; s < A.cols(); ++s) {
        double theta = std::abs(A(ref, s)) > 0 ? std::arg(A(ref, s)) : 0.0;
        E += M(s) * std::polar(1.0, -theta) * A.col(s);
    }
    return E;
}

std::vector<double> default_feature_grid(const Eigen::VectorXd& levels, double T) {
    double lo = std::min(levels.minCoeff(), 0.0) - 8 * pi / T;
    double hi = std::max(levels.maxCoeff(), 0.0) + 8 * pi / T;
    double d = two_pi / (10 * T);
    int n = static_cast<int>(std::ceil((hi - lo) / d)) + 1;
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + i * d;
    return g;
}

FeatureSpectrum feature_spectrum(const EigenSystem& es, double T,
                                 const std::vector<double>& omega_grid) {
    if (!(T > 0)) throw DomainError("feature_spectrum: T must be positive");
    if (omega_grid.size() < 3) throw DomainError("feature_spectrum: omega grid too short");
    FeatureSpectrum out;
    out.T = T;
    out.omega_grid = omega_grid;
    const Eigen::VectorXd& lv = es.values;
    const double scale = std::max(lv.cwiseAbs().maxCoeff(), 1e-300);

    double min_gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j + 1 < lv.size(); ++j) {
        double g = lv(j + 1) - lv(j);
        if (g > 1e-9 * scale) min_gap = std::min(min_gap, g);
    }
    if (T * min_gap < 20) {
        std::ostringstream os;
        os << "T * min level spacing = " << T * min_gap << " < 20; neighbouring peaks may merge";
        out.warnings.push_back(os.str());
    }
    double step = 0;
    for (std::size_t i = 0; i + 1 < omega_grid.size(); ++i)
        step = std::max(step, omega_grid[i + 1] - omega_grid[i]);
    if (step > pi / T)
        out.warnings.push_back("omega grid coarser than half a sinc main lobe; peaks may be missed");

    for (double w : omega_grid) out.F_values.push_back(feature_function(lv, T, w));
    const auto& F = out.F_values;
    for (std::size_t i = 1; i + 1 < F.size(); ++i) {
        if (F[i] < 0.25 || F[i] < F[i - 1] || F[i] <= F[i + 1]) continue;
        auto [w, f] = refine_max([&](double x) { return feature_function(lv, T, x); },
                                 omega_grid[i - 1], omega_grid[i + 1]);
        out.peaks.push_back(w);
        out.amplitudes.push_back(f);
    }

    for (double w : out.peaks) {
        Eigen::Index j = 0;
        (lv.array() - w).abs().minCoeff(&j);
        if (std::abs(lv(j) - w) > two_pi / T) {  // vacuum peak
            out.states.emplace_back();
            out.fidelities.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        Eigen::VectorXcd E = fictitious_eigenstate(es, T, w);
        double proj = 0;
        for (Eigen::Index r = 0; r < lv.size(); ++r)
            if (std::abs(lv(r) - lv(j)) <= 1e-9 * scale) proj += std::norm(es.vectors.col(r).dot(E));
        out.fidelities.push_back(std::sqrt(proj) / E.norm());
        out.states.push_back(std::move(E));
    }
    return out;
}

FeatureSpectrum feature_spectrum(const LatticeSpec& spec, double T,
                                 const std::vector<double>& omega_grid) {
    return feature_spectrum(eig_hermitian(build_real_space(spec)), T, omega_grid);
}

Eigen::VectorXcd site_signal(const EigenSystem& es, double t) {
    Eigen::VectorXcd ph(es.values.size());
    for (Eigen::Index j = 0; j < ph.size(); ++j) ph(j) = std::polar(1.0, es.values(j) * t);
    return es.vectors.cwiseAbs2().cast<cplx>() * ph;
}

std::vector<double> default_signal_times(const Eigen::VectorXd& levels, double window) {
    double wmax = std::max(levels.cwiseAbs().maxCoeff(), 1e-300);
    double dt = pi / (4 * wmax);
    int n = static_cast<int>(std::ceil(window / dt)) + 1;
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = window * i / (n - 1);
    return t;
}

ButterflySignal butterfly_signal(const EigenSystem& es, const std::vector<double>& t_grid) {
    const std::size_t N = t_grid.size();
    if (N < 8) throw DomainError("butterfly_signal: need at least 8 samples");
    const double dt = t_grid[1] - t_grid[0];
    if (!(dt > 0)) throw DomainError("butterfly_signal: time grid must increase");
    for (std::size_t i = 1; i < N; ++i)
        if (std::abs(t_grid[i] - t_grid[i - 1] - dt) > 1e-9 * dt)
            throw DomainError("butterfly_signal: time grid must be uniform");
    const Eigen::VectorXd& lv = es.values;
    double wmax = lv.cwiseAbs().maxCoeff();
    if (wmax * dt >= pi) {
        std::ostringstream os;
        os << "butterfly_signal: step " << dt << " s aliases |omega| = " << wmax
           << " rad/s (needs dt < " << pi / wmax << ")";
        throw SamplingError(os.str());
    }

    ButterflySignal out;
    out.times = t_grid;
    out.window = t_grid.back() - t_grid.front();
    const double inv = 1.0 / lv.size();
    out.chi_bar.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        cplx acc = 0;
        for (Eigen::Index j = 0; j < lv.size(); ++j) acc += std::polar(1.0, lv(j) * t_grid[i]);
        out.chi_bar(i) = acc * inv;
    }

    std::vector<double> w(N);
    double wsum = 0;
    for (std::size_t i = 0; i < N; ++i) {
        w[i] = 0.5 * (1 - std::cos(two_pi * i / (N - 1)));
        wsum += w[i];
    }
    auto amp = [&](double om) {
        cplx acc = 0, rot = std::polar(1.0, -om * dt), ph = std::polar(1.0, -om * t_grid[0]);
        for (std::size_t i = 0; i < N; ++i) {
            acc += w[i] * out.chi_bar(i) * ph;
            ph *= rot;
        }
        return std::abs(acc) / wsum;
    };

    const double Tw = out.window;
    double lo = lv.minCoeff() - 8 * pi / Tw, hi = lv.maxCoeff() + 8 * pi / Tw;
    double d = two_pi / (10 * Tw);
    int n = static_cast<int>(std::ceil((hi - lo) / d)) + 1;
    for (int i = 0; i < n; ++i) {
        out.omega_grid.push_back(lo + i * d);
        out.spectrum.push_back(amp(lo + i * d));
    }
    const auto& S = out.spectrum;
    for (int i = 1; i + 1 < n; ++i) {
        if (S[i] < 0.5 * inv || S[i] < S[i - 1] || S[i] <= S[i + 1]) continue;
        auto [om, a] = refine_max(amp, out.omega_grid[i - 1], out.omega_grid[i + 1]);
        out.peaks.push_back(om);
        out.amplitudes.push_back(a);
    }
    return out;
}

ButterflySignal butterfly_signal(const LatticeSpec& spec, const std::vector<double>& t_grid) {
    return butterfly_signal(eig_hermitian(build_real_space(spec)), t_grid);
}

}  // namespace harper
