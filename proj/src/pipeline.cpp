#include "pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "checkpoint.hpp"

namespace msqg {

using nlohmann::json;

NoiseMode RunConfig::noise_mode() const {
    if (mode == "additive") return NoiseMode::Additive;
    if (mode == "multiplicative") return NoiseMode::Multiplicative;
    throw ConfigError("mode must be additive or multiplicative, got " + mode);
}

void RunConfig::validate() const {
    noise_mode();
    if (stages < 1) throw ZeroStages("stages must be >= 1");
    if (a < 2 || b < 2) throw NonPositiveBase("a and b must be >= 2");
    if (stages > 1 && a % 5 != 0)
        throw ConfigError(
            "perturbation waves need lattice frequencies: a must be a "
            "multiple of 5");
    if (grid_n < 16 || grid_n % 2 != 0)
        throw ConfigError("grid must be even and >= 16");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (energy_kind != "affine" && energy_kind != "exponential")
        throw ConfigError("energy kind must be affine or exponential");
    if (!(holder_delta > 0.0 && holder_delta < 0.25))
        throw ConfigError("holder delta must lie in (0, 1/4)");
    if (paths < 1) throw ConfigError("paths must be >= 1");
}

namespace {

json regime_to_json(const RegimeReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"id", c.id},
                          {"requirement", c.requirement},
                          {"holds", c.holds},
                          {"slack", c.slack}});
    return {{"regime", r.theoretical ? "Theoretical" : "Demonstration"},
            {"checks", checks}};
}

json schedule_to_json(const ParamSchedule& s) {
    json lam = json::array(), del = json::array(), ell = json::array(),
         tau = json::array(), ts = json::array(), fc = json::array();
    for (int q = 0; q <= s.max_index(); ++q) {
        lam.push_back({{"log", s.lambda[q].log},
                       {"value", s.lambda[q].overflow ? json() : json(s.lambda[q].value)},
                       {"overflow", s.lambda[q].overflow}});
        del.push_back({{"log", s.delta[q].log}, {"value", s.delta[q].value}});
        ell.push_back({{"log", s.ell[q].log}, {"value", s.ell[q].value}});
        if (q >= 1)
            tau.push_back({{"log", s.tau[q].log}, {"value", s.tau[q].value}});
        ts.push_back(s.t_start[q]);
        fc.push_back(s.f_cut[q] == HUGE_VAL ? json() : json(s.f_cut[q]));
    }
    return {{"a", s.a},       {"b", s.b},         {"beta", s.beta},
            {"alpha", s.alpha}, {"gamma", s.gamma}, {"sigma", s.sigma},
            {"stages", s.stages}, {"lambda", lam},  {"delta", del},
            {"ell", ell},      {"tau", tau},       {"t_start", ts},
            {"f_cut", fc},     {"m0", s.m0}};
}

json inductive_to_json(const InductiveReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"id", row.id},
                        {"measured", row.measured},
                        {"bound", row.bound},
                        {"holds", row.holds}});
    return {{"q", r.q},
            {"rows", rows},
            {"energy_ratio_min", r.energy_ratio_min},
            {"energy_ratio_max", r.energy_ratio_max},
            {"all_hold", r.all_hold}};
}

bool finite(double v) { return std::isfinite(v); }

struct StageSweepResult {
    InductiveReport inductive;
    std::vector<EnergyTraceRow> trace;
    double quad_rel_gap_max = 0.0;
    double cauchy_max = 0.0, cauchy_bound = 0.0;
    double div_ratio_max = 0.0;      // ||div w|| / ||w||
    double mass_out_w = 0.0;         // outside [lam/2, 2 lam]
    double overlap_yl_w = 0.0, overlap_w_z = 0.0;
    double imag_max = 0.0;
    int clip_events = 0;
    json stress_rows = json::array();
    double stress_total_max = 0.0;
    double residual_rel_max = 0.0;
    double pressure_gap_max = 0.0;
};

/// One streaming pass over the stage-(q+1) grid: every reported quantity of
/// the new state in a single sweep so field evaluations are shared.
StageSweepResult sweep_stage(const std::shared_ptr<StageWorkspace>& ws,
                             IterationState& next, const EnergyProfile& e,
                             const RunConfig& cfg, const UpsilonPath* ups,
                             double m_L) {
    StageSweepResult out;
    const auto& in = ws->inputs();
    const ParamSchedule& s = *in.sched;
    const int q1 = in.q + 1;
    const double lam1 = s.lambda[q1].value;
    const double grid_dt = ws->grid_dt();
    const double ebar = e.sup(-2.0, std::max(1.0, ws->t_hi()));
    const double lamdel_q2 = s.lambda_delta(q1 + 1);
    const double lamdel_q3 = s.lambda_delta(q1 + 2);
    const double eps32 = in.geo->eps_gamma / (32.0 * 4.0 * M_PI * M_PI);
    const bool mult = in.mode == NoiseMode::Multiplicative;

    std::vector<double> times;
    for (double t = ws->t_lo(); t <= ws->t_hi() + 1e-12; t += grid_dt)
        times.push_back(t);

    double sup_y = 0.0, sup_c1 = 0.0, sup_dty = 0.0;
    double mass_y = 0.0, mass_r = 0.0, stress_ratio = 0.0;
    double ratio_min = HUGE_VAL, ratio_max = -HUGE_VAL;

    const double tau_next = s.tau[q1 + 1].value;
    const double ell_next = s.ell[q1 + 1].value;
    const TimeKernel tk_next =
        TimeKernel::make(tau_next, tau_next / in.kernel_taps);

    const std::size_t sup_stride = std::max(1, cfg.sup_stride);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        const VectorField wt = ws->w(t);
        const VectorField y1 = ws->y_next(t);
        const double et = e.at(t);

        // purity and reality (Fourier-side quantities, every sample)
        const double nw = norm_hs(wt, 0.0);
        if (nw > 0.0) {
            out.div_ratio_max = std::max(
                out.div_ratio_max, norm_hs(divergence(wt), 0.0) / nw);
            out.mass_out_w = std::max(
                out.mass_out_w,
                mass_outside_annulus(wt, 0.5 * lam1, 2.0 * lam1));
            out.overlap_yl_w =
                std::max(out.overlap_yl_w, support_overlap(ws->y_l(t), wt));
            if (!mult)
                out.overlap_w_z = std::max(
                    out.overlap_w_z,
                    support_overlap(wt, ws->z_trunc(t, q1)));
        }

        // quadrature
        const double quad = ws->quadrature_sum(t);
        if (quad > 0.0) {
            const double wh = std::pow(norm_hs(wt, 0.5), 2);
            out.quad_rel_gap_max = std::max(out.quad_rel_gap_max,
                                            std::abs(wh - quad) / quad);
        }

        mass_y = std::max(mass_y, mass_outside_ball(y1, 2.0 * lam1));

        // physical-space sup rows on a stride (each costs several grid
        // transforms)
        if (ti % sup_stride == 0) {
            out.imag_max = std::max(out.imag_max, imag_residue(wt.c1));
            const double cb =
                std::sqrt(s.m0) * std::sqrt(ebar) *
                std::exp(0.5 * s.delta[q1].log) *
                (mult ? std::exp(1.5 * std::pow(cfg.horizon_L, 0.25)) /
                            std::sqrt(ws->upsilon_l(t))
                      : 1.0);
            out.cauchy_bound = std::max(out.cauchy_bound, cb);
            out.cauchy_max =
                std::max(out.cauchy_max, norm_sup(y1 - ws->prev().y(t)));
            sup_y = std::max(sup_y, norm_sup(y1));
            sup_c1 = std::max(
                sup_c1, norm_c1(y1) + norm_sup(frac_laplacian(y1, 1.0)));
        }

        // energy sandwich trace
        EnergyTraceRow row;
        row.t = t;
        row.e = et;
        if (!mult) {
            const VectorField sum = y1 + ws->z_trunc(t, q1);
            row.pinned = std::pow(norm_hs(sum, 0.5), 2);
        } else {
            const double u = ws->upsilon(t);
            row.pinned = u * u * std::pow(norm_hs(y1, 0.5), 2);
        }
        row.gap = et - row.pinned;
        row.window_lo = 0.75 * lamdel_q2 * et;
        row.window_hi = 1.25 * lamdel_q2 * et;
        const double ratio = row.gap / (lamdel_q2 * et);
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
        out.trace.push_back(row);

        // material derivative at next-stage scales, on a stride
        if (cfg.dt_stride > 0 && ti % std::size_t(cfg.dt_stride) == 0) {
            VectorField yl_acc(in.grid);
            for (std::size_t i = 0; i < tk_next.weights.size(); ++i) {
                const double lag =
                    double(tk_next.lag_offset + i) * tk_next.dt;
                yl_acc = yl_acc + tk_next.weights[i] * next.y(t - lag);
            }
            VectorField drift =
                frac_laplacian(mollify_space(yl_acc, ell_next), 1.0);
            if (!mult && in.z) {
                VectorField zl_acc(in.grid);
                for (std::size_t i = 0; i < tk_next.weights.size(); ++i) {
                    const double lag =
                        double(tk_next.lag_offset + i) * tk_next.dt;
                    zl_acc = zl_acc + tk_next.weights[i] *
                                          ws->z_trunc(t - lag, q1);
                }
                drift =
                    drift + frac_laplacian(mollify_space(zl_acc, ell_next), 1.0);
            }
            if (mult && ups) drift = ups->upsilon_mollified(t, tau_next) * drift;
            const double h = tau_next / 8.0;
            const VectorField dy =
                (1.0 / (2.0 * h)) * (next.y(t + h) - next.y(t - h));
            sup_dty = std::max(sup_dty, norm_sup(dy + advect(drift, y1)));
        }

        // stress breakdown + residual on a stride
        if (cfg.stress_stride > 0 &&
            ti % std::size_t(cfg.stress_stride) == 0 && ti > 0 &&
            ti + 1 < times.size()) {
            const StressBreakdown br = assemble_stress(*ws, t, grid_dt);
            const auto sups = br.sup_norms();
            const SymTFField total = br.total();
            const double total_sup = norm_sup(total);
            mass_r = std::max(mass_r, mass_outside_ball(total, 4.0 * lam1));
            stress_ratio =
                std::max(stress_ratio, total_sup / (lamdel_q2 * et));
            out.stress_total_max = std::max(out.stress_total_max, total_sup);
            const double target =
                eps32 * lamdel_q3 * et *
                (mult ? std::exp(-3.0 * std::pow(cfg.horizon_L, 0.25)) : 1.0);

            const ResidualReport rr = equation_residual(
                next, s, in.z, ups, t, grid_dt);
            out.residual_rel_max = std::max(out.residual_rel_max, rr.sup_rel);
            out.pressure_gap_max =
                std::max(out.pressure_gap_max, rr.pressure_gap);

            json srow = {{"t", t},
                         {"transport", sups[0]},
                         {"nash", sups[1]},
                         {"linear", sups[2]},
                         {"oscillation", sups[3]},
                         {"commutator1", sups[4]},
                         {"commutator2", sups[5]},
                         {"total", total_sup},
                         {"target_next", target},
                         {"residual_rel", rr.sup_rel}};
            out.stress_rows.push_back(srow);
        }
    }

    // assemble the inductive report at level q+1
    out.inductive.q = q1;
    double cum = 1.0;
    for (int j = 1; j <= q1; ++j) cum += std::exp(0.5 * s.delta[j].log);
    const double mfac = mult ? std::pow(m_L, 4) : 1.0;
    auto add = [&](std::string id, double measured, double bound) {
        InductiveRow r;
        r.id = std::move(id);
        r.measured = measured;
        r.bound = bound;
        r.holds = measured <= bound;
        out.inductive.rows.push_back(r);
    };
    add("freq_support_y", mass_y, 0.0);
    add("amp_sup", sup_y, std::sqrt(s.m0) * cum * mfac * std::sqrt(ebar));
    add("amp_c1", sup_c1, std::sqrt(s.m0) * mfac * s.lambda[q1].value *
                              std::exp(0.5 * s.delta[q1].log) *
                              std::sqrt(ebar));
    add("material_derivative", sup_dty,
        s.m0 * s.lambda[q1].value * s.lambda[q1].value * s.delta[q1].value *
            ebar *
            (mult ? std::pow(m_L, 8) * std::exp(std::pow(cfg.horizon_L, 0.25))
                  : 1.0));
    add("freq_support_stress", mass_r, 0.0);
    add("stress_size", stress_ratio,
        eps32 * (mult ? std::exp(-3.0 * std::pow(cfg.horizon_L, 0.25)) : 1.0));
    out.inductive.energy_ratio_min = ratio_min;
    out.inductive.energy_ratio_max = ratio_max;
    {
        InductiveRow r;
        r.id = "energy_window";
        r.measured = ratio_min;
        r.bound = ratio_max;
        r.holds = ratio_min >= 0.75 - 1e-12 && ratio_max <= 1.25 + 1e-12;
        out.inductive.rows.push_back(r);
    }
    out.inductive.all_hold = true;
    for (const auto& r : out.inductive.rows)
        out.inductive.all_hold = out.inductive.all_hold && r.holds;
    out.clip_events = ws->clip_events();
    return out;
}

void save_field_checkpoint(const std::string& path, const VectorField& f,
                           double dt, std::uint64_t seed) {
    Checkpoint c;
    c.n = std::uint64_t(f.grid().n);
    c.components = 2;
    c.time_count = 1;
    c.record_points = c.n * c.n;
    c.dt = dt;
    c.seed = seed;
    c.payload.reserve(2 * c.record_points);
    const auto p1 = fft::real_samples(f.c1);
    const auto p2 = fft::real_samples(f.c2);
    c.payload.insert(c.payload.end(), p1.begin(), p1.end());
    c.payload.insert(c.payload.end(), p2.begin(), p2.end());
    c.save(path);
}

void save_path_checkpoint(const std::string& path, const ZProcess& z) {
    Checkpoint c;
    c.n = z.modes.size();
    c.components = 2;  // re, im
    c.time_count = z.history.size();
    c.record_points = c.n;
    c.dt = z.spec.dt;
    c.seed = z.spec.seed;
    c.payload.reserve(c.record_points * 2 * c.time_count);
    for (const auto& step : z.history) {
        for (const auto& v : step) c.payload.push_back(v.real());
        for (const auto& v : step) c.payload.push_back(v.imag());
    }
    c.save(path);
}

}  // namespace

RunArtifacts run_pipeline(const RunConfig& cfg, bool write_outputs) {
    RunArtifacts art;
    cfg.validate();
    const NoiseMode mode = cfg.noise_mode();
    const bool mult = mode == NoiseMode::Multiplicative;

    const PeriodicGrid grid = PeriodicGrid::make(cfg.grid_n);
    ParamSchedule sched = build_schedule(
        cfg.a, cfg.b, cfg.beta, cfg.alpha, cfg.gamma, cfg.sigma, cfg.stages,
        mult ? std::optional<double>(cfg.horizon_L) : std::nullopt);
    const RegimeReport regime = check_admissibility(sched, mode);
    const DirectionSystem geo = build_direction_system();

    // measured operator constants (fixed internal probe seeds keep these
    // independent of the run seed)
    const PeriodicGrid probe_grid = PeriodicGrid::make(64);
    const double c1 = measure_projector_norm(
        probe_grid, {8.0, 16.0}, cfg.projector_probes, 0x5147AA01u);
    const SobolevConstants cst = measure_sobolev_constants(
        probe_grid, cfg.sigma, cfg.probe_count, 0x5147AA02u);
    sched.m0 = compute_m0(geo, c1);

    const EnergyProfile energy =
        cfg.energy_kind == "affine"
            ? EnergyProfile::affine(cfg.energy_d0, cfg.energy_d1)
            : EnergyProfile::exponential(cfg.energy_d0, cfg.energy_d1);
    const double horizon = mult ? cfg.horizon_L : 1.0;
    const double e_inf = energy.inf(-2.0, std::max(1.0, horizon));

    json report;
    report["schema"] = "msqg-report/1";
    report["config"] = {{"mode", cfg.mode},
                        {"a", cfg.a},
                        {"b", cfg.b},
                        {"beta", cfg.beta},
                        {"alpha", cfg.alpha},
                        {"gamma", cfg.gamma},
                        {"sigma", cfg.sigma},
                        {"stages", cfg.stages},
                        {"grid", cfg.grid_n},
                        {"dt", cfg.dt},
                        {"seed", cfg.seed},
                        {"noise_amplitude", cfg.noise_amplitude},
                        {"energy_kind", cfg.energy_kind},
                        {"energy_d0", cfg.energy_d0},
                        {"energy_d1", cfg.energy_d1},
                        {"strict", cfg.strict}};
    report["regime"] = regime_to_json(regime);
    report["constants"] = {{"c1", c1},
                           {"c_s", cst.c_s},
                           {"c_0", cst.c_0},
                           {"eps_gamma", geo.eps_gamma},
                           {"m0", sched.m0}};

    // grid sizing rule (recommendation) for the first perturbative stage
    if (cfg.stages > 1) {
        const double lam1 = sched.lambda[1].value;
        report["grid_rule"] = {
            {"recommended_n", 16.0 * lam1},
            {"satisfied", double(cfg.grid_n) >= 16.0 * lam1}};
    }

    // ------------------------------- noise ---------------------------------
    ZProcess z;
    BrownianPath bpath;
    UpsilonPath ups;
    StoppingResult stop;
    MultStopping mstop;
    double t_stop = 1.0;

    if (!mult) {
        NoiseSpec spec;
        spec.sigma = cfg.sigma;
        spec.amplitude = cfg.noise_amplitude;
        spec.mode_radius = cfg.noise_mode_radius > 0.0
                               ? cfg.noise_mode_radius
                               : std::min(grid.dealias_radius, 42.0);
        spec.dt = cfg.dt;
        spec.seed = cfg.seed;
        z = solve_stokes_z(spec, 1.0);
        stop = stopping_time_additive(z, sched, cst, geo.eps_gamma,
                                      cfg.holder_delta, e_inf);
        t_stop = stop.time;
        report["noise"] = {{"kind", "additive"},
                           {"modes", z.modes.size()},
                           {"trace_sum", z.trace_sum()},
                           {"trace_margin", z.spec.trace_margin()},
                           {"stopping_time", stop.time},
                           {"stopping_binding", stop.binding}};
    } else {
        bpath = sample_brownian(cfg.horizon_L, cfg.dt, cfg.seed,
                                cfg.noise_amplitude);
        ups.path = &bpath;
        mstop = stopping_time_mult(bpath, cfg.horizon_L, cfg.holder_delta);
        t_stop = mstop.t_L;
        report["noise"] = {{"kind", "multiplicative"},
                           {"stopping_time", mstop.t_L},
                           {"stopping_binding", mstop.binding},
                           {"m_L", mstop.m_L}};
        if (cfg.paths > 1) {
            std::vector<double> tls(cfg.paths);
            parallel_for(std::size_t(cfg.paths), cfg.workers, [&](std::size_t i) {
                const BrownianPath p = sample_brownian(
                    cfg.horizon_L, cfg.dt,
                    counter_hash(cfg.seed, i, 0x4D435041u, 1),
                    cfg.noise_amplitude);
                tls[i] = stopping_time_mult(p, cfg.horizon_L,
                                            cfg.holder_delta).t_L;
            });
            int count = 0;
            for (double v : tls)
                if (v >= cfg.mc_horizon) ++count;
            report["noise"]["mc_paths"] = cfg.paths;
            report["noise"]["mc_horizon"] = cfg.mc_horizon;
            report["noise"]["p_tl_ge_T"] = double(count) / cfg.paths;
        }
    }

    // ------------------------------ base stage ------------------------------
    IterationState state =
        base_step(mode, sched, grid, mult ? nullptr : &z, t_stop);

    json stages_json = json::array();
    std::ostringstream trace_csv, stress_csv;
    trace_csv << "stage,t,e,pinned,gap,window_lo,window_hi\n";
    stress_csv << "stage,t,transport,nash,linear,oscillation,commutator1,"
                  "commutator2,total,target_next,residual_rel\n";

    {
        // stage-0 scan on its own grid
        std::vector<double> times;
        const double dt0 = sched.tau[1].value / cfg.samples_per_slice;
        for (double t = sched.t_start[0]; t <= t_stop + 1e-12; t += dt0)
            times.push_back(t);
        InductiveOptions opts;
        opts.dt_stride = cfg.dt_stride;
        opts.sup_stride = cfg.sup_stride;
        opts.kernel_taps = cfg.kernel_taps;
        const InductiveScan scan =
            check_inductive(state, energy, sched, geo, sched.m0,
                            mult ? nullptr : &z, mult ? &ups : nullptr,
                            mstop.m_L, times, opts);
        json stage0 = {{"q", 0},
                       {"inductive", inductive_to_json(scan.report)}};
        // base-step residual at a few times
        double rmax = 0.0;
        for (std::size_t i = 0; i < times.size();
             i += std::max<std::size_t>(1, times.size() / 8)) {
            const double t = times[i];
            if (t - dt0 < sched.t_start[0] || t + dt0 > t_stop) continue;
            const ResidualReport rr = equation_residual(
                state, sched, mult ? nullptr : &z, mult ? &ups : nullptr, t,
                dt0);
            rmax = std::max(rmax, rr.sup_rel);
        }
        stage0["residual_rel_max"] = rmax;
        stages_json.push_back(stage0);
        for (const auto& row : scan.trace)
            trace_csv << 0 << ',' << row.t << ',' << row.e << ','
                      << row.pinned << ',' << row.gap << ',' << row.window_lo
                      << ',' << row.window_hi << '\n';
    }

    // ------------------------------ iterations ------------------------------
    bool strict_failed = false;
    for (int q = 0; q + 1 < cfg.stages; ++q) {
        StageInputs in;
        in.sched = &sched;
        in.geo = &geo;
        in.energy = &energy;
        in.mode = mode;
        in.z = mult ? nullptr : &z;
        in.brownian = mult ? &bpath : nullptr;
        in.grid = grid;
        in.q = q;
        in.t_stop = t_stop;
        in.workers = cfg.workers;
        in.samples_per_slice = cfg.samples_per_slice;
        in.flow_samples_per_slice = cfg.flow_samples_per_slice;
        in.kernel_taps = cfg.kernel_taps;

        auto ws = std::make_shared<StageWorkspace>(in, state);
        IterationState next = compose_iterate(ws, ws->grid_dt());
        const StageSweepResult sweep =
            sweep_stage(ws, next, energy, cfg, mult ? &ups : nullptr,
                        mstop.m_L);

        json stage_json = {
            {"q", q + 1},
            {"inductive", inductive_to_json(sweep.inductive)},
            {"cauchy", {{"measured", sweep.cauchy_max},
                        {"bound", sweep.cauchy_bound},
                        {"holds", sweep.cauchy_max <= sweep.cauchy_bound}}},
            {"quadrature_rel_gap_max", sweep.quad_rel_gap_max},
            {"perturbation",
             {{"div_ratio_max", sweep.div_ratio_max},
              {"band_mass_outside", sweep.mass_out_w},
              {"overlap_yl_w", sweep.overlap_yl_w},
              {"overlap_w_znext", sweep.overlap_w_z},
              {"imag_residue_max", sweep.imag_max}}},
            {"gamma_clip_events", sweep.clip_events},
            {"stress", sweep.stress_rows},
            {"stress_total_max", sweep.stress_total_max},
            {"residual_rel_max", sweep.residual_rel_max},
            {"pressure_gap_max", sweep.pressure_gap_max}};
        stages_json.push_back(stage_json);

        for (const auto& row : sweep.trace)
            trace_csv << (q + 1) << ',' << row.t << ',' << row.e << ','
                      << row.pinned << ',' << row.gap << ',' << row.window_lo
                      << ',' << row.window_hi << '\n';
        for (const auto& srow : sweep.stress_rows)
            stress_csv << (q + 1) << ',' << srow["t"].get<double>() << ','
                       << srow["transport"].get<double>() << ','
                       << srow["nash"].get<double>() << ','
                       << srow["linear"].get<double>() << ','
                       << srow["oscillation"].get<double>() << ','
                       << srow["commutator1"].get<double>() << ','
                       << srow["commutator2"].get<double>() << ','
                       << srow["total"].get<double>() << ','
                       << srow["target_next"].get<double>() << ','
                       << srow["residual_rel"].get<double>() << '\n';

        if (!finite(sweep.quad_rel_gap_max) || !finite(sweep.cauchy_max)) {
            art.exit_code = 4;
            report["fault"] = "non-finite quantity in stage sweep";
            break;
        }
        if (cfg.strict &&
            (sweep.div_ratio_max > cfg.tol_divergence ||
             sweep.mass_out_w > 0.0 ||
             sweep.quad_rel_gap_max > cfg.tol_quadrature ||
             sweep.clip_events > 0 || sweep.imag_max > cfg.tol_reality))
            strict_failed = true;

        state = next;
        if (write_outputs) {
            std::filesystem::create_directories(cfg.out_dir);
            save_field_checkpoint(cfg.out_dir + "/y_stage" +
                                      std::to_string(q + 1) + ".msqg",
                                  state.y(t_stop), cfg.dt, cfg.seed);
        }
    }

    report["stages"] = stages_json;
    if (strict_failed && art.exit_code == 0) art.exit_code = 3;

    art.report = std::move(report);
    art.energy_trace_csv = trace_csv.str();
    art.stress_norms_csv = stress_csv.str();

    if (write_outputs) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream(cfg.out_dir + "/report.json")
            << art.report.dump(2) << '\n';
        std::ofstream(cfg.out_dir + "/energy_trace.csv")
            << art.energy_trace_csv;
        std::ofstream(cfg.out_dir + "/stress_norms.csv")
            << art.stress_norms_csv;
        if (!mult && !z.zero())
            save_path_checkpoint(cfg.out_dir + "/zpath.msqg", z);
    }
    return art;
}

// ---------------------------------------------------------------------------
// verify suite
// ---------------------------------------------------------------------------

namespace {

struct VerifyCheck {
    std::string id;
    std::string description;
};

const std::vector<VerifyCheck>& catalogue() {
    static const std::vector<VerifyCheck> cat = {
        {"inverse_divergence_identity",
         "div(B f) recovers the solenoidal mean-zero part of f"},
        {"leray_idempotent", "Leray projection is idempotent and kills "
                             "gradients"},
        {"frac_laplacian_inverse", "Lambda^r Lambda^{-r} = id on mean-zero"},
        {"sqg_identity", "closed-form nonlinearity matches the term-by-term "
                         "form"},
        {"band_support", "band projector output lives on the exact annulus"},
        {"geometry_reconstruction",
         "rank-one decomposition reproduces matrices in the ball"},
        {"partition_of_unity", "squared cutoffs sum to one"},
        {"ou_variance", "mode variance matches the closed form"},
        {"flow_constant_drift", "backward characteristics match the "
                                "constant-drift closed form"},
        {"phase_modulus", "phase fields stay unimodular"},
    };
    return cat;
}

}  // namespace

json verify_catalogue() {
    json out = json::array();
    for (const auto& c : catalogue())
        out.push_back({{"id", c.id}, {"description", c.description}});
    return out;
}

VerifyResult run_verify(int grid_n, std::uint64_t seed) {
    VerifyResult res;
    res.checks = json::array();
    const PeriodicGrid g = PeriodicGrid::make(grid_n);
    auto push = [&](const std::string& id, bool pass, double value) {
        res.checks.push_back({{"id", id}, {"pass", pass}, {"value", value}});
        if (!pass) res.exit_code = 3;
    };

    // operator identities
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const VectorField f = random_band_field(
                g, g.dealias_radius / 2.0, counter_hash(seed, i, 1, 0), false);
            const VectorField target = leray(mean_zero(f));
            const VectorField got = divergence(inverse_divergence(f));
            const double scale = std::max(norm_hs(target, 0.0), 1e-30);
            worst = std::max(worst,
                             norm_hs(got - target, 0.0) / scale);
        }
        push("inverse_divergence_identity", worst <= 1e-10, worst);
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const VectorField f = random_band_field(
                g, g.dealias_radius / 2.0, counter_hash(seed, i, 2, 0), false);
            const VectorField p1 = leray(f);
            worst = std::max(worst, norm_hs(leray(p1) - p1, 0.0));
            const ScalarField s = random_band_scalar(
                g, g.dealias_radius / 2.0, counter_hash(seed, i, 3, 0));
            worst = std::max(worst, norm_hs(leray(gradient(s)), 0.0));
        }
        push("leray_idempotent", worst <= 1e-12, worst);
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const ScalarField s = mean_zero(random_band_scalar(
                g, g.dealias_radius / 2.0, counter_hash(seed, i, 4, 0)));
            const ScalarField back =
                frac_laplacian(frac_laplacian(s, -0.75), 0.75);
            const double scale = std::max(norm_hs(s, 0.0), 1e-30);
            worst = std::max(worst, norm_hs(back - s, 0.0) / scale);
        }
        push("frac_laplacian_inverse", worst <= 1e-12, worst);
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const VectorField v = random_band_field(
                g, g.dealias_radius / 3.0, counter_hash(seed, i, 5, 0), true);
            const VectorField a = sqg_nonlinearity(v);
            const VectorField b = momentum_nonlinearity(v);
            const double scale = std::max(norm_sup(a), 1e-30);
            worst = std::max(worst, norm_sup(a - b) / scale);
        }
        push("sqg_identity", worst <= 1e-8, worst);
    }
    {
        const double lambda = 25.0;
        // this check is the one that trips BandExceedsGrid on small grids
        const VectorField f = random_band_field(
            g, std::min(g.dealias_radius, 9.0 * lambda / 8.0),
            counter_hash(seed, 0, 6, 0), false);
        const VectorField pf = band_project(f, 1.0, 0.0, lambda);
        const double mass = mass_outside_annulus(pf, 7.0 * lambda / 8.0,
                                                 9.0 * lambda / 8.0);
        push("band_support", mass == 0.0, mass);
    }
    {
        const DirectionSystem geo = build_direction_system();
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Sym2 r = Sym2::identity();
            r.r11 += geo.eps_gamma *
                     (2.0 * uniform01(seed, i, 7, 0) - 1.0);
            r.r12 += geo.eps_gamma *
                     (2.0 * uniform01(seed, i, 7, 1) - 1.0);
            r.r22 += geo.eps_gamma *
                     (2.0 * uniform01(seed, i, 7, 2) - 1.0);
            const Sym2 back = geo.reconstruct(
                i % 2 == 0 ? SliceParity::Odd : SliceParity::Even, r);
            worst = std::max({worst, std::abs(back.r11 - r.r11),
                              std::abs(back.r12 - r.r12),
                              std::abs(back.r22 - r.r22)});
        }
        push("geometry_reconstruction", worst <= 1e-12, worst);
    }
    {
        const CutoffFamily cf = CutoffFamily::make(0.25, -1.0, 1.0);
        double worst = 0.0;
        int max_active = 0;
        for (int i = 0; i <= 10000; ++i) {
            const double t = -1.0 + 2.0 * i / 10000.0;
            worst = std::max(worst, std::abs(cf.partition_sum(t) - 1.0));
            max_active =
                std::max(max_active, int(cf.active(t).size()));
        }
        push("partition_of_unity", worst <= 1e-12 && max_active <= 2, worst);
    }
    {
        // single-mode OU vs closed form over a short MC
        NoiseSpec spec;
        spec.sigma = 0.1;
        spec.amplitude = 1.0;
        spec.mode_radius = 2.0;
        spec.dt = 1.0 / 64.0;
        double acc = 0.0;
        const int paths = 400;
        OUMode mode0;
        for (int pth = 0; pth < paths; ++pth) {
            spec.seed = counter_hash(seed, pth, 8, 0);
            const ZProcess zp = solve_stokes_z(spec, 0.5);
            acc += std::norm(zp.history.back()[0]);
            mode0 = zp.modes[0];
        }
        const double expect = ou_variance(mode0.g, mode0.theta, 0.5);
        const double se = expect * std::sqrt(2.0 / paths);
        const double got = acc / paths;
        push("ou_variance", std::abs(got - expect) <= 5.0 * se,
             std::abs(got - expect) / se);
    }
    {
        // constant drift flow
        VectorField drift(g);
        drift.c1.at(0, 0) = 0.3;
        drift.c2.at(0, 0) = -0.2;
        DriftSampler ds;
        ds.t0 = -1.0;
        ds.dt = 1.0;
        ds.samples.push_back(SparseVector::from(drift));
        ds.samples.push_back(SparseVector::from(drift));
        ds.samples.push_back(SparseVector::from(drift));
        const FlowMap flow = FlowMap::make(g, 0, 0.0, ds, 0.05, 1);
        std::vector<double> dx, dy;
        flow.displacement(0.4, dx, dy);
        double worst = 0.0;
        for (std::size_t i = 0; i < dx.size(); ++i)
            worst = std::max({worst, std::abs(dx[i] + 0.4 * 0.3),
                              std::abs(dy[i] - 0.4 * 0.2)});
        push("flow_constant_drift", worst <= 1e-10, worst);

        std::vector<cplx> psi;
        phase_from_displacement(dx, dy, 25.0, 0.6, 0.8, psi);
        double dev = 0.0;
        for (const auto& p : psi) dev = std::max(dev, std::abs(std::abs(p) - 1.0));
        push("phase_modulus", dev <= 1e-12, dev);
    }
    return res;
}

}  // namespace msqg
