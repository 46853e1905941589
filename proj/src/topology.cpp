#include "harper/topology.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "harper/errors.hpp"
#include "harper/parallel.hpp"
#include "harper/spectra.hpp"
#include "harper/units.hpp"

namespace harper {

namespace {

struct ZoneData {
    int n = 0, Q = 0;
    std::vector<Eigen::MatrixXcd> vec;  // per grid point, index i*n + j
    Eigen::MatrixXd energies;
};

ZoneData sample_zone(const LatticeSpec& spec, int P, int Q, int n) {
    ZoneData z;
    z.n = n;
    z.Q = Q;
    z.vec.resize(n * n);
    z.energies.resize(n * n, Q);
    const double dkx = two_pi / Q / n, dky = two_pi / n;
    const double tol = 1e-10 * spec.coupling_scale();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            EigenSystem es = eig_hermitian(build_bloch(i * dkx, j * dky, spec, P, Q));
            for (int b = 0; b + 1 < Q; ++b)
                if (es.values(b + 1) - es.values(b) <= tol) {
                    std::ostringstream os;
                    os << "bands " << b << " and " << b + 1 << " touch near k = (" << i * dkx
                       << ", " << j * dky << "); refine the grid or move the flux";
                    throw RefinementError(os.str());
                }
            z.vec[i * n + j] = es.vectors;
            z.energies.row(i * n + j) = es.values.transpose();
        }
    return z;
}

BerryField field_from(const ZoneData& z) {
    const int n = z.n, Q = z.Q;
    BerryField f;
    f.grid = n;
    f.kx_grid = linspace(0, two_pi / Q * (n - 1) / n, n);
    f.ky_grid = linspace(0, two_pi * (n - 1) / n, n);
    f.phase.assign(Q, Eigen::MatrixXd(n, n));
    auto link = [&](int a, int b, int band) {
        cplx u = z.vec[a].col(band).dot(z.vec[b].col(band));  // <u_a|u_b>
        if (std::abs(u) <= 1e-12)
            throw RefinementError("link variable vanishes; refine the Brillouin-zone grid");
        return u / std::abs(u);
    };
    for (int band = 0; band < Q; ++band)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int ip = (i + 1) % n, jp = (j + 1) % n;
                int a = i * n + j, b = ip * n + j, c = ip * n + jp, d = i * n + jp;
                cplx w = link(a, b, band) * link(b, c, band) * std::conj(link(d, c, band)) *
                         std::conj(link(a, d, band));
                double ph = std::arg(w);
                f.phase[band](i, j) = ph;
                f.max_abs_phase = std::max(f.max_abs_phase, std::abs(ph));
            }
    return f;
}

}  // namespace

BerryField berry_field(const LatticeSpec& spec, int P, int Q, int grid) {
    if (grid < 20) throw DomainError("berry_field: grid must be at least 20");
    return field_from(sample_zone(spec, P, Q, grid));
}

ChernResult chern_numbers(const LatticeSpec& spec, int P, int Q, int grid, bool refine) {
    if (grid < 20) throw DomainError("chern_numbers: grid must be at least 20");
    for (int n = grid;; n *= 2) {
        ZoneData z = sample_zone(spec, P, Q, n);
        BerryField f = field_from(z);
        bool admissible = f.max_abs_phase < admissible_phase;
        if (!admissible) {
            if (refine && 2 * n <= max_chern_grid) continue;
            std::ostringstream os;
            os << "plaquette phase " << f.max_abs_phase << " exceeds pi/2 on a " << n << "x" << n
               << " grid; a denser grid is needed";
            throw RefinementError(os.str());
        }
        ChernResult r;
        r.grid = n;
        r.max_abs_phase = f.max_abs_phase;
        r.band_energies = z.energies;
        int acc = 0;
        for (int b = 0; b < Q; ++b) {
            double c = f.phase[b].sum() / two_pi;
            double rc = std::round(c);
            r.max_residue = std::max(r.max_residue, std::abs(c - rc));
            r.chern.push_back(static_cast<int>(rc));
            acc += static_cast<int>(rc);
            r.winding.push_back(acc);
        }
        if (r.max_residue >= 1e-6)
            throw RefinementError("Chern sums are not integers to 1e-6; refine the grid");
        return r;
    }
}

double berry_perturbative(double k_x, double k_y, const LatticeSpec& spec, int P, int Q, int j) {
    EigenSystem es = eig_hermitian(build_bloch(k_x, k_y, spec, P, Q));
    if (j < 0 || j >= Q) throw DomainError("berry_perturbative: band index out of range");
    Eigen::MatrixXcd X = es.vectors.adjoint() * bloch_dkx(k_x, spec, P, Q) * es.vectors;
    Eigen::MatrixXcd Y = es.vectors.adjoint() * bloch_dky(k_y, spec, P, Q) * es.vectors;
    const double tol = 1e-10 * spec.coupling_scale();
    cplx s = 0;
    for (int r = 0; r < Q; ++r) {
        if (r == j) continue;
        double de = es.values(j) - es.values(r);
        if (std::abs(de) <= tol) throw DomainError("berry_perturbative: band is degenerate at k");
        s += (X(j, r) * Y(r, j) - Y(j, r) * X(r, j)) / (de * de);
    }
    return s.imag();
}

EdgeBranchCount edge_branch_winding(const LatticeSpec& spec, int P, int Q, int nk, int threads) {
    if (Q < 2) throw DomainError("edge_branch_winding: needs at least two bands");
    LatticeSpec bulk = spec;
    ZoneData z = sample_zone(bulk, P, Q, 60);
    EdgeBranchCount out;
    for (int b = 0; b + 1 < Q; ++b) {
        double top = z.energies.col(b).maxCoeff(), bot = z.energies.col(b + 1).minCoeff();
        if (bot <= top) throw DomainError("edge_branch_winding: Bloch bands overlap, no gap");
        out.mid_gap.push_back(0.5 * (top + bot));
    }
    std::vector<double> k(nk);
    for (int q = 0; q < nk; ++q) k[q] = two_pi * q / nk;
    LatticeSpec open = spec;
    open.col_boundary = Boundary::open;
    BandStructure bs = bands_open_column(open, k, threads);
    for (double w : out.mid_gap) {
        int t = 0, bo = 0;
        for (int s = 0; s < open.W; ++s)
            for (int q = 0; q < nk; ++q) {
                int qn = (q + 1) % nk;
                double a = bs.bands(q, s) - w, c = bs.bands(qn, s) - w;
                if (a * c >= 0) continue;
                double m = 0.5 * (bs.edge_weight(q, s) + bs.edge_weight(qn, s));
                int sign = c > a ? 1 : -1;
                (m > 0 ? t : bo) += sign;
            }
        out.top.push_back(t);
        out.bottom.push_back(bo);
    }
    return out;
}

}  // namespace harper
