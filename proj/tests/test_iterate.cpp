#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iterate.hpp"
#include "stress.hpp"

using namespace msqg;

namespace {

struct Fixture {
    ParamSchedule sched = build_schedule(5, 2, 0.51, 1.25, 1.0, 0.1, 2);
    DirectionSystem geo = build_direction_system();
    EnergyProfile energy = EnergyProfile::affine(80.0, 1.0);
    PeriodicGrid grid = PeriodicGrid::make(160);

    Fixture() { sched.m0 = compute_m0(geo, 1.3); }

    StageInputs inputs(const ZProcess* z) {
        StageInputs in;
        in.sched = &sched;
        in.geo = &geo;
        in.energy = &energy;
        in.mode = NoiseMode::Additive;
        in.z = z;
        in.grid = grid;
        in.q = 0;
        in.t_stop = 1.0;
        in.workers = 1;
        return in;
    }
};

}  // namespace

TEST_CASE("energy profiles: invariants and evaluation") {
    const EnergyProfile a = EnergyProfile::affine(80.0, 1.0);
    CHECK(a.at(0.0) == 80.0);
    CHECK(a.at(1.0) == 81.0);
    CHECK(a.deriv(0.5) == 1.0);
    CHECK(a.inf(-2.0, 1.0) == doctest::Approx(78.0));
    CHECK_THROWS_AS(EnergyProfile::affine(5.0, 1.0), ConfigError);
    CHECK_THROWS_AS(EnergyProfile::affine(80.0, -1.0), ConfigError);

    const EnergyProfile e = EnergyProfile::exponential(30.0, 1.0);
    CHECK(e.at(0.0) == 30.0);
    CHECK(e.deriv(0.0) == doctest::Approx(30.0));
    CHECK_THROWS_AS(EnergyProfile::exponential(4.0, 1.0), ConfigError);
}

TEST_CASE("cutoffs: plateau, exact partition, two active slices") {
    const CutoffFamily cf = CutoffFamily::make(0.1, -1.0, 1.0);
    // plateau at anchors
    CHECK(cf.chi(3, 0.3) == 1.0);
    CHECK(cf.chi(2, 0.3) == 0.0);
    CHECK(cf.chi(4, 0.3) == 0.0);
    // partition of unity on a dense grid
    double worst = 0.0;
    int most = 0;
    for (int i = 0; i <= 10000; ++i) {
        const double t = -1.0 + 2.0 * i / 10000.0;
        worst = std::max(worst, std::abs(cf.partition_sum(t) - 1.0));
        most = std::max(most, int(cf.active(t).size()));
    }
    CHECK(worst <= 1e-12);
    CHECK(most <= 2);
}

TEST_CASE("additive base step: zero path gives zero stress") {
    Fixture fx;
    NoiseSpec spec;
    spec.amplitude = 0.0;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    CHECK(norm_hs(s0.y(0.5), 0.0) == 0.0);
    CHECK(norm_sup(s0.stress(0.5)) == 0.0);
    CHECK(s0.t_start == -2.0);
}

TEST_CASE("multiplicative base step is identically zero") {
    Fixture fx;
    const IterationState s0 =
        base_step(NoiseMode::Multiplicative, fx.sched, fx.grid, nullptr, 1.0);
    CHECK(norm_hs(s0.y(0.3), 0.0) == 0.0);
    CHECK(norm_sup(s0.stress(0.3)) == 0.0);
}

TEST_CASE("additive base step with noise: stress is deterministic before 0 "
          "and supported correctly") {
    Fixture fx;
    NoiseSpec spec;
    spec.sigma = 0.1;
    spec.amplitude = 1.0;
    spec.mode_radius = 8.0;
    spec.dt = 1.0 / 256.0;
    spec.seed = 5;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    CHECK(norm_sup(s0.stress(-0.5)) == 0.0);  // z == 0 on [-2, 0]
    const SymTFField r = s0.stress(0.5);
    CHECK(norm_sup(r) > 0.0);
    // z_0 cut at 1.25 -> products live inside |xi| <= 2.5 < 4 lambda_0
    CHECK(mass_outside_ball(r, 4.0 * fx.sched.lambda[0].value) == 0.0);
}

TEST_CASE("energy gap: closed-form cases") {
    Fixture fx;
    NoiseSpec spec;
    spec.amplitude = 0.0;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    StageWorkspace ws(fx.inputs(&z), s0);

    // y = z = 0: gamma = e(t)(1 - lam_2 del_2) / (4 (2pi)^2)
    const double lamdel = fx.sched.lambda_delta(2);
    const double t = 0.25;
    const double want =
        fx.energy.at(t) * (1.0 - lamdel) / (4.0 * 4.0 * M_PI * M_PI);
    CHECK(ws.energy_gap(t) == doctest::Approx(want).epsilon(1e-12));
    CHECK(ws.clip_events() == 0);
    // mollified gap is close (profile is slowly varying)
    CHECK(ws.gamma_l(t) == doctest::Approx(want).epsilon(1e-2));
}

TEST_CASE("rho floor and amplitude bound") {
    Fixture fx;
    NoiseSpec spec;
    spec.amplitude = 0.0;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    StageWorkspace ws(fx.inputs(&z), s0);

    SliceData& sd = ws.slice(0);
    // R = 0: rho = eps^{-1} ell + gamma_l(anchor)
    const double floor_part = ws.ell() / fx.geo.eps_gamma;
    CHECK(sd.rho >= floor_part);
    CHECK(sd.rho == doctest::Approx(floor_part + sd.gamma_l_anchor)
                        .epsilon(1e-13));

    // amplitudes are spatially constant at lam^{-1/2} rho^{1/2} gamma_k(Id)
    const auto wd = ws.waves(0, 0.0);
    const auto gam = fx.geo.gamma_coeffs(SliceParity::Even, Sym2::identity());
    for (int p = 0; p < 3; ++p) {
        const double want = std::sqrt(sd.rho / fx.sched.lambda[1].value) *
                            gam[2 * p];
        for (std::size_t i = 0; i < wd.amplitude[p].size(); i += 1111)
            CHECK(wd.amplitude[p][i] == doctest::Approx(want).epsilon(1e-12));
        // sup bound: lam^{-1/2} rho^{1/2} sup gamma
        CHECK(wd.amplitude[p][0] <=
              std::sqrt(sd.rho / fx.sched.lambda[1].value) *
                  fx.geo.sup_gamma_norm() * (1.0 + 1e-12));
    }
}

TEST_CASE("perturbation: plane-wave closed form under trivial flows") {
    Fixture fx;
    NoiseSpec spec;
    spec.amplitude = 0.0;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    auto ws = std::make_shared<StageWorkspace>(fx.inputs(&z), s0);

    // at the anchor of slice j=0 only chi_0 = 1 is active
    const double t = 0.0;
    const VectorField wt = ws->w(t);
    // oracle: w = sum_pairs 2 A_p Re[i k_perp e^{i lam k.x}] with A_p the
    // constant amplitude; modes sit exactly at +-lam k
    SliceData& sd = ws->slice(0);
    const auto gam = fx.geo.gamma_coeffs(SliceParity::Even, Sym2::identity());
    const double lam = fx.sched.lambda[1].value;
    const auto& dirs = fx.geo.directions(SliceParity::Even);
    VectorField want(fx.grid);
    for (int p = 0; p < 3; ++p) {
        const double A = std::sqrt(sd.rho / lam) * gam[2 * p];
        const double kx = dirs[2 * p].fx(), ky = dirs[2 * p].fy();
        const int cx = int(std::lround(lam * kx));
        const int cy = int(std::lround(lam * ky));
        const cplx coef = A * cplx(0.0, 1.0);
        want.c1.at(cx, cy) += coef * (-ky);
        want.c2.at(cx, cy) += coef * kx;
        want.c1.at(-cx, -cy) += std::conj(coef * (-ky));
        want.c2.at(-cx, -cy) += std::conj(coef * kx);
    }
    CHECK(norm_hs(wt - want, 0.0) < 1e-12 * norm_hs(want, 0.0));

    // frequency purity on the lattice, solenoidality, reality
    CHECK(mass_outside_annulus(wt, 0.5 * lam, 2.0 * lam) == 0.0);
    CHECK(norm_hs(divergence(wt), 0.0) <= 1e-10 * norm_hs(wt, 0.0));
    CHECK(imag_residue(wt.c1) < 1e-12);
    CHECK(imag_residue(wt.c2) < 1e-12);
}

TEST_CASE("energy quadrature identity under trivial flows") {
    Fixture fx;
    NoiseSpec spec;
    spec.amplitude = 0.0;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    auto ws = std::make_shared<StageWorkspace>(fx.inputs(&z), s0);
    for (double t : {0.0, 0.003, 0.0061, 0.25}) {
        const double wh = std::pow(norm_hs(ws->w(t), 0.5), 2);
        const double quad = ws->quadrature_sum(t);
        CHECK(wh == doctest::Approx(quad).epsilon(1e-10));
    }
}

TEST_CASE("composition: supports, cauchy recording, pressure bookkeeping") {
    Fixture fx;
    NoiseSpec spec;
    spec.amplitude = 0.0;
    const ZProcess z = solve_stokes_z(spec, 1.0);
    const IterationState s0 =
        base_step(NoiseMode::Additive, fx.sched, fx.grid, &z, 1.0);
    auto ws = std::make_shared<StageWorkspace>(fx.inputs(&z), s0);
    IterationState s1 = compose_iterate(ws, ws->grid_dt());
    CHECK(s1.q == 1);
    const double t = 0.1;
    const VectorField y1 = s1.y(t);
    CHECK(mass_outside_ball(y1, 2.0 * fx.sched.lambda[1].value) == 0.0);
    // w = y1 - y_l; disjoint supports make the energies additive
    const VectorField wt = ws->w(t);
    CHECK(support_overlap(ws->y_l(t), wt) == 0.0);
    const double lhs = std::pow(norm_hs(y1, 0.5), 2);
    const double rhs = std::pow(norm_hs(ws->y_l(t), 0.5), 2) +
                       std::pow(norm_hs(wt, 0.5), 2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("inductive check on the fresh multiplicative base step") {
    Fixture fx;
    const IterationState s0 =
        base_step(NoiseMode::Multiplicative, fx.sched, fx.grid, nullptr, 1.0);
    std::vector<double> times;
    for (double t = -2.0; t <= 1.0; t += 0.125) times.push_back(t);
    const InductiveScan scan =
        check_inductive(s0, fx.energy, fx.sched, fx.geo, fx.sched.m0, nullptr,
                        nullptr, 2.856, times);
    // everything zero: all hypotheses hold; the sandwich reduces to
    // lambda_1 delta_1 = 1
    for (const auto& row : scan.report.rows) {
        INFO(row.id);
        CHECK(row.holds);
    }
    CHECK(scan.report.energy_ratio_min == doctest::Approx(1.0));
    CHECK(scan.report.energy_ratio_max == doctest::Approx(1.0));
    CHECK(scan.report.all_hold);
}

TEST_CASE("energy sandwich arithmetic at the base step") {
    // gap = e(t); window [3/4, 5/4] lambda_1 delta_1 e(t); lambda_1 delta_1
    // = 1 makes the ratio exactly 1
    Fixture fx;
    CHECK(fx.sched.lambda_delta(1) == doctest::Approx(1.0).epsilon(1e-14));
}
