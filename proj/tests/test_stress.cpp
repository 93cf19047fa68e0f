#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stress.hpp"

using namespace msqg;

namespace {

struct Fixture {
    ParamSchedule sched = build_schedule(5, 2, 0.51, 1.25, 1.0, 0.1, 2);
    DirectionSystem geo = build_direction_system();
    EnergyProfile energy = EnergyProfile::affine(80.0, 1.0);
    PeriodicGrid grid = PeriodicGrid::make(160);

    Fixture() { sched.m0 = compute_m0(geo, 1.3); }

    StageInputs inputs(NoiseMode mode, const ZProcess* z,
                       const BrownianPath* b) {
        StageInputs in;
        in.sched = &sched;
        in.geo = &geo;
        in.energy = &energy;
        in.mode = mode;
        in.z = z;
        in.brownian = b;
        in.grid = grid;
        in.q = 0;
        in.t_stop = 1.0;
        in.workers = 1;
        return in;
    }
};

}  // namespace

TEST_CASE("zero-noise additive: z-linked components vanish, R_L = B Lam^g w") {
    Fixture fx;
    NoiseSpec spec;
    spec.amplitude = 0.0;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    auto ws = std::make_shared<StageWorkspace>(
        fx.inputs(NoiseMode::Additive, &z, nullptr), s0);

    const double t = 0.07;
    const StressBreakdown br = assemble_stress(*ws, t, ws->grid_dt());

    CHECK(norm_sup(br.r_com2) == 0.0);
    CHECK(norm_sup(br.r_com1) == 0.0);  // y_l = z = 0
    const SymTFField want = inverse_divergence(
        frac_laplacian(ws->w(t), fx.sched.gamma));
    CHECK(norm_sup(br.r_l - want) < 1e-12 * std::max(norm_sup(want), 1.0));
    // Nash error vanishes when y_l = z_q = 0
    CHECK(norm_sup(br.r_n) == 0.0);
    // oscillation: R_l = 0, so it is the closed-form quadratic term
    const SymTFField osc =
        inverse_divergence(perp_curl_form(ws->w(t), ws->w(t)));
    CHECK(norm_sup(br.r_o - osc) < 1e-12 * std::max(norm_sup(osc), 1.0));
}

TEST_CASE("constant brownian path: multiplicative R_Com2 vanishes") {
    Fixture fx;
    BrownianPath b;
    b.dt = 1.0 / 64.0;
    b.b.assign(65, 0.0);  // B == 0 -> Upsilon == Upsilon_l == 1
    const IterationState s0 =
        base_step(NoiseMode::Multiplicative, fx.sched, fx.grid, nullptr, 1.0);
    auto ws = std::make_shared<StageWorkspace>(
        fx.inputs(NoiseMode::Multiplicative, nullptr, &b), s0);
    const double t = 0.11;
    const StressBreakdown br = assemble_stress(*ws, t, ws->grid_dt());
    CHECK(norm_sup(br.r_com2) < 1e-14);
    CHECK(norm_sup(br.r_l - inverse_divergence(
                               frac_laplacian(ws->w(t), fx.sched.gamma) +
                               0.5 * ws->w(t))) < 1e-13);
}

TEST_CASE("every component is symmetric trace-free with real samples") {
    Fixture fx;
    NoiseSpec spec;
    spec.sigma = 0.1;
    spec.amplitude = 1e-3;
    spec.mode_radius = 8.0;
    spec.dt = 1.0 / 512.0;
    spec.seed = 11;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    auto ws = std::make_shared<StageWorkspace>(
        fx.inputs(NoiseMode::Additive, &z, nullptr), s0);
    const double t = 0.31;
    const StressBreakdown br = assemble_stress(*ws, t, ws->grid_dt());
    for (const SymTFField* r :
         {&br.r_t, &br.r_n, &br.r_l, &br.r_o, &br.r_com1, &br.r_com2}) {
        CHECK(imag_residue(r->a11) < 1e-12);
        CHECK(imag_residue(r->a12) < 1e-12);
    }
    // total = sum of components exactly
    const SymTFField total = br.total();
    const SymTFField manual =
        br.r_t + br.r_n + br.r_l + br.r_o + br.r_com1 + br.r_com2;
    CHECK(norm_hs(total.a11 - manual.a11, 0.0) == 0.0);
}

TEST_CASE("base-step residual: noise-driven stress solves the equation") {
    Fixture fx;
    NoiseSpec spec;
    spec.sigma = 0.1;
    spec.amplitude = 1.0;
    spec.mode_radius = 8.0;
    spec.dt = 1.0 / 512.0;
    spec.seed = 3;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    for (double t : {0.25, 0.5, 0.75}) {
        const ResidualReport rr =
            equation_residual(s0, fx.sched, &z, nullptr, t, 1.0 / 512.0);
        CHECK(rr.sup_rel < 1e-6);
    }
}

TEST_CASE("multiplicative base-step residual is zero to round-off") {
    Fixture fx;
    BrownianPath b = sample_brownian(1.0, 1.0 / 256.0, 21);
    UpsilonPath ups;
    ups.path = &b;
    const IterationState s0 =
        base_step(NoiseMode::Multiplicative, fx.sched, fx.grid, nullptr, 1.0);
    const ResidualReport rr =
        equation_residual(s0, fx.sched, nullptr, &ups, 0.5, 1.0 / 256.0);
    CHECK(rr.sup_abs == 0.0);
}

TEST_CASE("after one step: residual matches the decomposition defect and "
          "converges at order >= 2") {
    Fixture fx;
    NoiseSpec spec;
    spec.amplitude = 0.0;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    auto ws = std::make_shared<StageWorkspace>(
        fx.inputs(NoiseMode::Additive, &z, nullptr), s0);
    const double t = 0.21;

    // assemble the stress with a fixed stencil; evaluate the equation with a
    // much finer stencil so the measured residual is the assembly's
    // time-discretization error
    const double h0 = ws->grid_dt();
    double errs[3];
    int k = 0;
    for (double h : {h0, h0 / 2.0, h0 / 4.0}) {
        IterationState s1 = compose_iterate(ws, h);
        const ResidualReport rr =
            equation_residual(s1, fx.sched, &z, nullptr, t, h0 / 64.0);
        errs[k++] = rr.sup_rel;
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    const double rate = std::log2(errs[0] / errs[2]) / 2.0;
    CHECK(rate >= 1.9);
}
