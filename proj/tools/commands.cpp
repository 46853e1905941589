#include "commands.hpp"

#include <cmath>

#include "harper/chirality.hpp"
#include "harper/circuit.hpp"
#include "harper/errors.hpp"
#include "harper/measurement.hpp"
#include "harper/parallel.hpp"
#include "harper/spectra.hpp"
#include "harper/topology.hpp"
#include "harper/units.hpp"

namespace harpersim {

using namespace harper;

namespace {

const double default_gx = mhz(4);

json nan_or(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

// ---------------------------------------------------------------- params

json cmd_params(const ConfigReader& root, Run& run) {
    ConfigReader c = root.block("circuit", true);
    RawCircuitParams raw;
    raw.L_J_odd = c.quantity("L_J_odd", Unit::inductance);
    raw.L_J_even = c.quantity("L_J_even", Unit::inductance);
    raw.L_T = c.quantity("L_T", Unit::inductance);
    raw.C = c.quantity("C", Unit::capacitance);
    raw.L0 = c.quantity("L0", Unit::inductance);
    raw.M0 = c.quantity("M0", Unit::inductance);
    raw.validate();

    ConfigReader b = root.block("bias");
    FluxBias bias;
    bias.phi_bar = b.quantity("phi_bar", Unit::flux, flux_quantum / 4);
    bias.phi_eff = b.quantity("phi_eff", Unit::flux, 0.0);
    bias.phi_odd = b.quantity("phi_odd", Unit::flux, 0.0);
    bias.phi_even = b.quantity("phi_even", Unit::flux, 0.0);
    bias.gamma = b.quantity("gamma", Unit::angle, 0.0);
    bias.validate();

    DerivedCircuitParams d = derive_params(raw, bias);
    const double h = planck_h;
    Csv csv({"quantity", "symbol", "value", "unit"});
    auto put = [&](const char* q, const char* sym, double v, const char* unit) {
        csv.row({std::string(q), std::string(sym), v, std::string(unit)});
    };
    put("odd-row Josephson energy", "E_J,o/h", d.E_J_odd / h / 1e9, "GHz");
    put("even-row Josephson energy", "E_J,e/h", d.E_J_even / h / 1e9, "GHz");
    put("charging energy", "E_C/h", d.E_C / h / 1e9, "GHz");
    put("odd-row plasma frequency", "omega_p,o/2pi", to_ghz(d.omega_p_odd), "GHz");
    put("even-row plasma frequency", "omega_p,e/2pi", to_ghz(d.omega_p_even), "GHz");
    put("odd-row qubit frequency", "omega_o/2pi", to_ghz(d.omega_odd), "GHz");
    put("even-row qubit frequency", "omega_e/2pi", to_ghz(d.omega_even), "GHz");
    put("column modulation frequency", "omega_oe/2pi", to_mhz(d.omega_oe), "MHz");
    put("odd-row impedance", "Z_o", d.Z_odd, "Ohm");
    put("even-row impedance", "Z_e", d.Z_even, "Ohm");
    put("bare column coupling", "t_y/2pi", to_mhz(d.t_y), "MHz");
    put("column coupling (min)", "g_y/2pi", to_mhz(d.g_y_range.lo), "MHz");
    put("column coupling (max)", "g_y/2pi", to_mhz(d.g_y_range.hi), "MHz");
    put("coupler mutual inductance (min)", "M", d.M_range.lo / pH, "pH");
    put("coupler mutual inductance (max)", "M", d.M_range.hi / pH, "pH");
    put("odd-row coupling (min)", "G_o/2pi", to_mhz(d.G_odd_range.lo), "MHz");
    put("odd-row coupling (max)", "G_o/2pi", to_mhz(d.G_odd_range.hi), "MHz");
    put("even-row coupling (min)", "G_e/2pi", to_mhz(d.G_even_range.lo), "MHz");
    put("even-row coupling (max)", "G_e/2pi", to_mhz(d.G_even_range.hi), "MHz");
    put("column coupling at bias", "g_y/2pi", to_mhz(d.g_y), "MHz");
    put("odd-row mutual inductance at bias", "M_o", d.M_odd / pH, "pH");
    put("even-row mutual inductance at bias", "M_e", d.M_even / pH, "pH");
    put("odd-row coupling at bias", "G_o/2pi", to_mhz(d.G_odd), "MHz");
    put("even-row coupling at bias", "G_e/2pi", to_mhz(d.G_even), "MHz");
    run.write(".csv", csv.str());

    json s = {{"E_C_over_h_GHz", d.E_C / h / 1e9},
              {"omega_p_odd_GHz", to_ghz(d.omega_p_odd)},
              {"omega_p_even_GHz", to_ghz(d.omega_p_even)},
              {"omega_oe_MHz", to_mhz(d.omega_oe)},
              {"Z_odd_ohm", d.Z_odd},
              {"Z_even_ohm", d.Z_even},
              {"t_y_MHz", to_mhz(d.t_y)},
              {"g_y_range_MHz", {to_mhz(d.g_y_range.lo), to_mhz(d.g_y_range.hi)}},
              {"M_range_pH", {d.M_range.lo / pH, d.M_range.hi / pH}},
              {"G_odd_range_MHz", {to_mhz(d.G_odd_range.lo), to_mhz(d.G_odd_range.hi)}},
              {"G_even_range_MHz", {to_mhz(d.G_even_range.lo), to_mhz(d.G_even_range.hi)}},
              {"warnings", d.warnings}};

    if (root.has("target_gx")) {
        double gx = root.quantity("target_gx", Unit::angular_frequency);
        auto [po, pe] = solve_row_flux(gx, raw);
        double Go = row_coupling(mutual_inductance(po, raw), d.omega_p_odd, d.Z_odd);
        double Ge = row_coupling(mutual_inductance(pe, raw), d.omega_p_even, d.Z_even);
        s["solved_flux"] = {{"target_gx_MHz", to_mhz(gx)},
                            {"phi_odd_Phi0", po / flux_quantum},
                            {"phi_even_Phi0", pe / flux_quantum},
                            {"G_odd_MHz", to_mhz(Go)},
                            {"G_even_MHz", to_mhz(Ge)},
                            {"round_trip_rel_error",
                             std::max(std::abs(Go + gx), std::abs(Ge + gx)) / std::abs(gx)}};
    }
    return s;
}

// ---------------------------------------------------------------- bands

json cmd_bands(const ConfigReader& root, const Context& ctx, Run& run) {
    LatticeSpec spec = read_lattice(root.block("lattice"), 1, 3);
    if (spec.col_boundary != Boundary::open)
        throw ValidationError("lattice.col_boundary: bands need open columns");
    ConfigReader sw = root.block("sweep");
    std::vector<double> k = sw.grid("k", Unit::angle, default_k_grid());
    BandStructure bs = bands_open_column(spec, k, ctx.threads);
    Csv csv({"k_index", "k_x", "band", "omega_over_gx", "mean_m"});
    for (std::size_t q = 0; q < k.size(); ++q)
        for (int s = 0; s < spec.W; ++s)
            csv.row({(long long)q, k[q], (long long)s, bs.bands(q, s) / spec.g_x, bs.edge_weight(q, s)});
    run.write(".csv", csv.str());

    json s = {{"W", spec.W}, {"gamma_over_pi", spec.gamma / pi}, {"K", spec.K()}, {"k_points", k.size()}};
    if (spec.W == 3) {
        Csv an({"k_index", "k_x", "strong_1", "strong_2", "strong_3"});
        for (std::size_t q = 0; q < k.size(); ++q) {
            auto e = threeleg_strong_coupling(k[q], spec.gamma, spec.g_x, spec.g_y);
            an.row({(long long)q, k[q], e[0] / spec.g_x, e[1] / spec.g_x, e[2] / spec.g_x});
        }
        run.write("_strong_coupling.csv", an.str());
        if (std::abs(spec.gamma) > 0 && std::abs(spec.gamma) < pi) {
            auto p = threeleg_perturbative(spec.gamma, spec.g_x, spec.g_y);
            auto r = threeleg_perturbative_rederived(spec.gamma, spec.g_x, spec.g_y);
            s["perturbative_over_gx"] = {{"E0", p.E0 / spec.g_x},
                                         {"Egamma_published", p.Egamma / spec.g_x},
                                         {"Egamma_rederived", r.Egamma / spec.g_x}};
        }
    }
    return s;
}

// ---------------------------------------------------------------- butterfly

json cmd_butterfly(const ConfigReader& root, const Context& ctx, Run& run) {
    LatticeSpec spec = read_lattice(root.block("lattice"), 17, 3);
    ConfigReader sw = root.block("sweep");
    std::vector<double> g = sw.grid("gamma", Unit::angle, default_butterfly_grid());
    ButterflySpectrum b = butterfly(spec, g, ctx.threads);
    Csv csv({"gamma_index", "gamma", "gamma_over_2pi", "level", "omega_over_gx"});
    for (std::size_t q = 0; q < g.size(); ++q)
        for (int l = 0; l < spec.dim(); ++l)
            csv.row({(long long)q, g[q], g[q] / two_pi, (long long)l, b.levels(q, l) / spec.g_x});
    run.write(".csv", csv.str());
    return {{"gamma_points", g.size()}, {"levels", spec.dim()}};
}

// ---------------------------------------------------------------- currents

json cmd_currents(const ConfigReader& root, const Context& ctx, Run& run) {
    ConfigReader lat = root.block("lattice");
    LatticeSpec spec = read_lattice(lat, 17, 3);
    if (!spec.is_open()) throw ValidationError("lattice: currents need open boundaries");
    ConfigReader sw = root.block("sweep");
    std::vector<double> Ks = sw.grid("K", Unit::none, {spec.K()});
    double tol = sw.quantity("tol_rel", Unit::none, default_vortex_tol);

    Csv csv({"K", "bond", "i", "j", "n", "m", "current_over_gx", "arrow"});
    json per_K = json::array();
    std::vector<GroundState> states;
    for (double K : Ks) {
        LatticeSpec s = spec;
        s.g_y = K * spec.g_x;
        GroundState gs = ground_state(s);
        CurrentPattern p = bond_currents(gs, s);
        CurrentPattern u = normalized(p, tol);
        for (int i = 0; i < s.W; ++i)
            for (int j = 0; j + 1 < s.L; ++j)
                csv.row({K, std::string("row"), (long long)i, (long long)j, s.n_of(j) + 0.5, s.m_of(i),
                         p.row(i, j) / s.g_x, u.row(i, j)});
        for (int i = 0; i + 1 < s.W; ++i)
            for (int j = 0; j < s.L; ++j)
                csv.row({K, std::string("col"), (long long)i, (long long)j, s.n_of(j), s.m_of(i) + 0.5,
                         p.col(i, j) / s.g_x, u.col(i, j)});
        json e = {{"K", K},
                  {"omega1_over_gx", gs.omega1 / s.g_x},
                  {"degenerate", gs.degenerate},
                  {"vortices", count_vortices(p, tol)},
                  {"max_abs_current_over_gx", max_abs_current(p) / s.g_x},
                  {"max_divergence_over_gx", max_divergence(p) / s.g_x}};
        if (s.W == 3) e["chiral_current_over_gx"] = chiral_current(p) / s.g_x;
        per_K.push_back(e);
        states.push_back(gs);
    }
    run.write(".csv", csv.str());
    json summary = {{"gamma_over_pi", spec.gamma / pi}, {"tol_rel", tol}, {"states", per_K}};

    if (root.has("diagnostics")) {
        ConfigReader d = root.block("diagnostics");
        std::vector<double> gammas = d.grid("gamma", Unit::angle, {0.4 * pi, 0.6 * pi});
        std::vector<double> Kg = d.grid("K", Unit::none, linspace(0.05, 2.0, 391));
        std::vector<double> kq = d.grid("k", Unit::angle, default_k_grid());
        std::vector<double> psiK = d.grid("psi_K", Unit::none, {0.3, 1.0, 2.0});
        Csv dcsv({"gamma", "K", "omega1_over_gx", "d1_over_gx", "d2_over_gx"});
        Csv pcsv({"gamma", "K", "m", "k_x", "weight"});
        json diag = json::array();
        for (double g : gammas) {
            LatticeSpec s = spec;
            s.gamma = wrap_angle(g);
            Derivatives dv = ground_energy_derivatives(s, Kg, s.gamma, ctx.threads);
            for (std::size_t q = 0; q < Kg.size(); ++q)
                dcsv.row({g, Kg[q], dv.value[q] / s.g_x, dv.d1[q] / s.g_x, dv.d2[q] / s.g_x});
            json peaks = json::array();
            for (double K : psiK) {
                s.g_y = K * spec.g_x;
                Eigen::MatrixXcd dist = quasimomentum_distribution(ground_state(s).psi, s, kq);
                Eigen::VectorXd tot = dist.cwiseAbs2().colwise().sum().transpose();
                Eigen::Index arg = 0;
                tot.maxCoeff(&arg);
                peaks.push_back({{"K", K}, {"peak_k_x", kq[arg]}});
                for (int i = 0; i < s.W; ++i)
                    for (std::size_t q = 0; q < kq.size(); ++q)
                        pcsv.row({g, K, s.m_of(i), kq[q], std::norm(dist(i, q))});
            }
            diag.push_back({{"gamma_over_pi", g / pi},
                            {"d1_max_jump_ratio", max_jump_ratio(dv.d1)},
                            {"d2_max_jump_ratio", max_jump_ratio(dv.d2)},
                            {"psi_prime_peaks", peaks}});
        }
        run.write("_derivatives.csv", dcsv.str());
        run.write("_psi_prime.csv", pcsv.str());
        summary["diagnostics"] = diag;
    }

    if (root.has("rabi")) {
        // synthetic pair traces from the first K, fitted back with g known
        ConfigReader r = root.block("rabi");
        double sigma = r.quantity("sigma", Unit::none, 0.01);
        double decay = r.quantity("decay", Unit::angular_frequency, 0.0);
        int samples = r.integer("samples", 64, 8, 100000);
        double periods = r.quantity("periods", Unit::none, 3.0);
        LatticeSpec s = spec;
        s.g_y = Ks.front() * spec.g_x;
        CurrentPattern p = bond_currents(states.front(), s);
        Csv rc({"bond", "i", "j", "true_over_gx", "fit_over_gx", "sigma_over_gx", "decay_fit"});
        long long stream = 0;
        double worst = 0;
        auto fit_one = [&](const char* kind, int i, int j, double I, double g) {
            std::vector<double> t(samples);
            double span = periods * pi / std::abs(g);
            for (int q = 0; q < samples; ++q) t[q] = span * q / (samples - 1);
            PopulationTrace tr = with_noise(rabi_trace(t, g, I, decay), sigma, ctx.seed, stream++);
            CurrentFit f = extract_current_fit(tr, g);
            worst = std::max(worst, std::abs(f.I_G - I) / s.g_x);
            rc.row({std::string(kind), (long long)i, (long long)j, I / s.g_x, f.I_G / s.g_x,
                    f.sigma_I / s.g_x, f.decay});
        };
        for (int i = 0; i < s.W; ++i)
            for (int j = 0; j + 1 < s.L; ++j) fit_one("row", i, j, p.row(i, j), s.g_x);
        for (int i = 0; i + 1 < s.W; ++i)
            for (int j = 0; j < s.L; ++j) fit_one("col", i, j, p.col(i, j), s.g_y);
        run.write("_rabi.csv", rc.str());
        summary["rabi"] = {{"max_abs_error_over_gx", worst}, {"seed", ctx.seed}};
    }
    return summary;
}

// ---------------------------------------------------------------- vortex-map

json cmd_vortex_map(const ConfigReader& root, const Context& ctx, Run& run) {
    LatticeSpec spec = read_lattice(root.block("lattice"), 17, 3);
    if (!spec.is_open()) throw ValidationError("lattice: vortex maps need open boundaries");
    ConfigReader sw = root.block("sweep");
    std::vector<double> g = sw.grid("gamma", Unit::angle, linspace(-pi, pi, 201));
    std::vector<double> K = sw.grid("K", Unit::none, linspace(0.01, 1.91, 191));
    double tol = sw.quantity("tol_rel", Unit::none, default_vortex_tol);
    PhaseMap m = vortex_map(spec, g, K, tol, ctx.threads);
    Csv csv({"gamma_index", "K_index", "gamma", "gamma_over_pi", "K", "vortices", "chiral_current_over_gx"});
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < K.size(); ++b)
            csv.row({(long long)a, (long long)b, g[a], g[a] / pi, K[b], (long long)m.vortex(a, b),
                     m.chiral(a, b) / spec.g_x});
    run.write(".csv", csv.str());
    if (sw.flag("gap_map", false)) {
        Eigen::MatrixXd gap = gap_map(spec, g, K, ctx.threads);
        Csv gc({"gamma_index", "K_index", "gamma", "K", "omega21_over_gx"});
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = 0; b < K.size(); ++b)
                gc.row({(long long)a, (long long)b, g[a], K[b], gap(a, b) / spec.g_x});
        run.write("_gap.csv", gc.str());
    }
    return {{"K_c", nan_or(m.K_c)}, {"gamma_c_over_pi", nan_or(m.gamma_c / pi)}, {"tol_rel", tol}};
}

// ---------------------------------------------------------------- chern

json cmd_chern(const ConfigReader& root, const Context& ctx, Run& run) {
    ConfigReader lat = root.block("lattice");
    ConfigReader c = root.block("chern");
    int P = c.integer("P", 1, -1000, 1000), Q = c.integer("Q", 5, 1, 1000);
    LatticeSpec spec = read_lattice(lat, 1, 1);
    spec.gamma = wrap_angle(two_pi * P / Q);
    int grid = c.integer("grid", default_chern_grid, 20, max_chern_grid);
    bool refine = c.flag("refine", true);
    int edge_W = c.integer("edge_W", 50, 2, 2000);
    int nk = c.integer("edge_k_points", 2001, 16, 1000000);

    ChernResult r = chern_numbers(spec, P, Q, grid, refine);
    json s = {{"P", P}, {"Q", Q}, {"chern", r.chern}, {"winding", r.winding}, {"grid", r.grid},
              {"max_residue", r.max_residue}, {"max_abs_phase", r.max_abs_phase}};
    if (2 * r.grid <= max_chern_grid) {
        ChernResult r2 = chern_numbers(spec, P, Q, 2 * r.grid, false);
        s["doubled_grid"] = {{"grid", r2.grid}, {"chern", r2.chern}, {"stable", r2.chern == r.chern}};
    }

    LatticeSpec e = spec;
    e.W = edge_W;
    e.col_boundary = Boundary::open;
    EdgeBranchCount ec = edge_branch_winding(e, P, Q, nk, ctx.threads);
    s["edge"] = {{"W", edge_W}, {"mid_gap_over_gx", json::array()}, {"top", ec.top}, {"bottom", ec.bottom}};
    for (double w : ec.mid_gap) s["edge"]["mid_gap_over_gx"].push_back(w / spec.g_x);

    std::vector<double> k = root.block("sweep").grid("k", Unit::angle, default_k_grid());
    BandStructure bs = bands_open_column(e, k, ctx.threads);
    Csv csv({"k_index", "k_x", "band", "omega_over_gx", "mean_m"});
    for (std::size_t q = 0; q < k.size(); ++q)
        for (int b = 0; b < e.W; ++b)
            csv.row({(long long)q, k[q], (long long)b, bs.bands(q, b) / spec.g_x, bs.edge_weight(q, b)});
    run.write("_edge_bands.csv", csv.str());

    Csv bz({"band", "kx_index", "ky_index", "k_x", "k_y", "omega_over_gx"});
    const int n = r.grid;
    for (int b = 0; b < Q; ++b)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                bz.row({(long long)b, (long long)i, (long long)j, two_pi / Q * i / n, two_pi * j / n,
                        r.band_energies(i * n + j, b) / spec.g_x});
    run.write("_bloch.csv", bz.str());

    // plaquette curvature F_xy / i = phase / (dk_x dk_y) at plaquette centres
    BerryField f = berry_field(spec, P, Q, r.grid);
    const double dkx = two_pi / Q / n, dky = two_pi / n;
    Csv bc({"band", "kx_index", "ky_index", "k_x", "k_y", "curvature"});
    for (int b = 0; b < Q; ++b)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                bc.row({(long long)b, (long long)i, (long long)j, f.kx_grid[i] + dkx / 2,
                        f.ky_grid[j] + dky / 2, f.phase[b](i, j) / (dkx * dky)});
    run.write("_berry.csv", bc.str());
    return s;
}

// ---------------------------------------------------------------- measurement

json cmd_measure_bands(const ConfigReader& root, const Context&, Run& run) {
    LatticeSpec spec = read_lattice(root.block("lattice"), 20, 3);
    ConfigReader m = root.block("measure");
    int nk = m.integer("k_points", default_band_k_points, 16, 1 << 20);
    bool strict = m.flag("strict_path", false);
    EigenSystem es = eig_hermitian(build_real_space(spec));
    Csv csv({"state", "k_x", "omega_over_gx", "weight"});
    double worst = 0;
    int detoured = 0;
    json failures = json::array();
    for (int j = 0; j < spec.dim(); ++j) {
        Eigen::VectorXcd psi = es.vectors.col(j);
        try {
            ReconstructedState rs = reconstruct_eigenstate_special(psi, spec, strict);
            worst = std::max(worst, 1 - state_fidelity(rs.amplitudes, psi));
            detoured += rs.detours > 0;
            psi = rs.amplitudes;
        } catch (const PathError& e) {
            failures.push_back({{"state", j}, {"reason", e.what()}});
            continue;
        }
        for (const BandPoint& p : band_points_special(psi, es.values(j), spec, nk))
            csv.row({(long long)j, p.k, p.omega / spec.g_x, p.weight});
    }
    run.write(".csv", csv.str());
    return {{"states", spec.dim()},
            {"worst_infidelity", worst},
            {"states_with_detours", detoured},
            {"path_failures", failures}};
}

json cmd_measure_feature(const ConfigReader& root, const Context&, Run& run) {
    LatticeSpec spec = read_lattice(root.block("lattice"), 17, 3);
    ConfigReader m = root.block("measure");
    double T = m.quantity("T_gx", Unit::none, default_feature_T_gx) / spec.g_x;
    EigenSystem es = eig_hermitian(build_real_space(spec));
    FeatureSpectrum fs = feature_spectrum(es, T, default_feature_grid(es.values, T));
    Csv csv({"omega_over_gx", "F"});
    for (std::size_t i = 0; i < fs.omega_grid.size(); ++i)
        csv.row({fs.omega_grid[i] / spec.g_x, fs.F_values[i]});
    run.write(".csv", csv.str());
    Csv pk({"peak", "omega_over_gx", "F", "state_fidelity"});
    int missed = 0;
    for (std::size_t i = 0; i < fs.peaks.size(); ++i)
        pk.row({(long long)i, fs.peaks[i] / spec.g_x, fs.amplitudes[i], fs.fidelities[i]});
    for (int j = 0; j < spec.dim(); ++j) {
        double best = INFINITY;
        for (double p : fs.peaks) best = std::min(best, std::abs(p - es.values(j)));
        missed += best > two_pi / T;
    }
    run.write("_peaks.csv", pk.str());
    return {{"T_gx", T * spec.g_x}, {"peaks", fs.peaks.size()}, {"levels", spec.dim()},
            {"levels_without_peak", missed}, {"warnings", fs.warnings}};
}

json cmd_measure_butterfly(const ConfigReader& root, const Context& ctx, Run& run) {
    LatticeSpec spec = read_lattice(root.block("lattice"), 17, 3);
    ConfigReader sw = root.block("sweep");
    std::vector<double> g = sw.grid("gamma", Unit::angle, linspace(0, two_pi, 41));
    ConfigReader m = root.block("measure");
    double window = m.quantity("window_gx", Unit::none, 400) / spec.g_x;
    std::vector<ButterflySignal> sig(g.size());
    parallel_for(g.size(), ctx.threads, [&](std::size_t q) {
        LatticeSpec s = spec;
        s.gamma = wrap_angle(g[q]);
        EigenSystem es = eig_hermitian(build_real_space(s));
        sig[q] = butterfly_signal(es, default_signal_times(es.values, window));
    });
    Csv csv({"gamma_index", "gamma", "omega_over_gx", "amplitude_times_LW"});
    for (std::size_t q = 0; q < g.size(); ++q)
        for (std::size_t i = 0; i < sig[q].peaks.size(); ++i)
            csv.row({(long long)q, g[q], sig[q].peaks[i] / spec.g_x, sig[q].amplitudes[i] * spec.dim()});
    run.write(".csv", csv.str());
    Csv tr({"t_gx", "re", "im"});
    for (std::size_t i = 0; i < sig.front().times.size(); ++i)
        tr.row({sig.front().times[i] * spec.g_x, sig.front().chi_bar(i).real(), sig.front().chi_bar(i).imag()});
    run.write("_signal.csv", tr.str());
    return {{"gamma_points", g.size()}, {"window_gx", window * spec.g_x}};
}

}  // namespace

LatticeSpec read_lattice(const ConfigReader& r, int L_default, int W_default) {
    LatticeSpec s;
    s.L = r.integer("L", L_default, 1, 100000);
    s.W = r.integer("W", W_default, 1, 100000);
    s.g_x = r.quantity("g_x", Unit::angular_frequency, default_gx);
    if (r.has("K") && r.has("g_y")) throw ValidationError(r.path() + ": give either K or g_y, not both");
    if (r.has("K")) s.g_y = r.quantity("K", Unit::none) * s.g_x;
    else s.g_y = r.quantity("g_y", Unit::angular_frequency, s.g_x);
    double g = r.quantity("gamma", Unit::angle, 0.0);
    if (!std::isfinite(g)) throw ValidationError(r.path() + ".gamma: must be finite");
    s.gamma = wrap_angle(g);
    auto bnd = [&](const char* key) {
        return r.choice(key, "open", {"open", "periodic"}) == "open" ? Boundary::open : Boundary::periodic;
    };
    s.row_boundary = bnd("row_boundary");
    s.col_boundary = bnd("col_boundary");
    s.validate();
    return s;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> n{"params",       "bands",         "butterfly",
                                            "currents",     "vortex-map",    "chern",
                                            "measure-bands", "measure-feature", "measure-butterfly"};
    return n;
}

json run_command(const std::string& name, const json& config, json& resolved, const Context& ctx,
                 Run& run) {
    ConfigReader root(&config, "", &resolved);
    if (name == "params") return cmd_params(root, run);
    if (name == "bands") return cmd_bands(root, ctx, run);
    if (name == "butterfly") return cmd_butterfly(root, ctx, run);
    if (name == "currents") return cmd_currents(root, ctx, run);
    if (name == "vortex-map") return cmd_vortex_map(root, ctx, run);
    if (name == "chern") return cmd_chern(root, ctx, run);
    if (name == "measure-bands") return cmd_measure_bands(root, ctx, run);
    if (name == "measure-feature") return cmd_measure_feature(root, ctx, run);
    if (name == "measure-butterfly") return cmd_measure_butterfly(root, ctx, run);
    throw ValidationError("unknown command " + name);
}

}  // namespace harpersim
