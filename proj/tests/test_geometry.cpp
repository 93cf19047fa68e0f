#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geometry.hpp"
#include "util.hpp"

using namespace msqg;

TEST_CASE("identity coefficients are exactly (7/16, 25/32, 25/32)") {
    const DirectionSystem geo = build_direction_system();
    const auto c = geo.pair_coeffs_identity(SliceParity::Odd);
    CHECK(c[0] == Rational(7, 16));
    CHECK(c[1] == Rational(25, 32));
    CHECK(c[2] == Rational(25, 32));
    // second set by symmetry
    const auto c2 = geo.pair_coeffs_identity(SliceParity::Even);
    CHECK(c2[0] == Rational(7, 16));
    CHECK(c2[1] == Rational(25, 32));
    CHECK(c2[2] == Rational(25, 32));
}

TEST_CASE("lattice membership, disjointness, pair closure, separation") {
    const DirectionSystem geo = build_direction_system();
    for (const auto* set : {&geo.gamma1, &geo.gamma2}) {
        CHECK(set->size() == 6);
        for (const auto& k : *set) {
            // 5k in Z^2
            CHECK((Rational(5) * k.x).den == 1);
            CHECK((Rational(5) * k.y).den == 1);
            // unit circle
            const double n2 = k.fx() * k.fx() + k.fy() * k.fy();
            CHECK(n2 == doctest::Approx(1.0).epsilon(1e-15));
            // pair closure: -k in the same set
            bool found = false;
            for (const auto& kk : *set)
                found = found || (kk.x == Rational(0) - k.x &&
                                  kk.y == Rational(0) - k.y);
            CHECK(found);
        }
        // |k + k'| >= 1/2 for non-cancelling pairs
        for (const auto& k : *set)
            for (const auto& kk : *set) {
                const double sx = k.fx() + kk.fx();
                const double sy = k.fy() + kk.fy();
                const double n = std::hypot(sx, sy);
                if (n > 1e-14) CHECK(n >= 0.5);
            }
    }
    // disjoint sets
    for (const auto& k : geo.gamma1)
        for (const auto& kk : geo.gamma2)
            CHECK_FALSE((k.x == kk.x && k.y == kk.y));
}

TEST_CASE("reconstruction over the ball (random sample)") {
    const DirectionSystem geo = build_direction_system();
    CHECK(geo.eps_gamma > 0.2);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        Sym2 r = Sym2::identity();
        r.r11 += geo.eps_gamma * (2.0 * uniform01(42, i, 0, 0) - 1.0);
        r.r12 += geo.eps_gamma * (2.0 * uniform01(42, i, 1, 0) - 1.0);
        r.r22 += geo.eps_gamma * (2.0 * uniform01(42, i, 2, 0) - 1.0);
        const auto parity = i % 2 ? SliceParity::Odd : SliceParity::Even;
        const Sym2 back = geo.reconstruct(parity, r);
        worst = std::max({worst, std::abs(back.r11 - r.r11),
                          std::abs(back.r12 - r.r12),
                          std::abs(back.r22 - r.r22)});
        // positivity of every coefficient inside the ball
        for (double c : geo.pair_coeffs(parity, r)) CHECK(c > 0.0);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("gamma coefficients: evenness and reconstruction at Id") {
    const DirectionSystem geo = build_direction_system();
    const auto g = geo.gamma_coeffs(SliceParity::Odd, Sym2::identity());
    CHECK(g.size() == 6);
    for (int p = 0; p < 3; ++p) CHECK(g[2 * p] == g[2 * p + 1]);
    CHECK(g[0] * g[0] == doctest::Approx(7.0 / 16.0).epsilon(1e-15));
    CHECK(g[2] * g[2] == doctest::Approx(25.0 / 32.0).epsilon(1e-15));
}

TEST_CASE("positivity margin at the computed radius") {
    const DirectionSystem geo = build_direction_system();
    // at the box corners (extreme points) every coefficient stays positive,
    // with the documented 5% margin
    double worst = HUGE_VAL;
    for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2)
            for (int sz = -1; sz <= 1; sz += 2) {
                Sym2 r = Sym2::identity();
                r.r11 += geo.eps_gamma * sx;
                r.r12 += geo.eps_gamma * sy;
                r.r22 += geo.eps_gamma * sz;
                for (auto parity : {SliceParity::Odd, SliceParity::Even})
                    for (double c : geo.pair_coeffs(parity, r))
                        worst = std::min(worst, c);
            }
    CHECK(worst > 0.0);
    CHECK(worst < 0.1);  // the radius is close to maximal
}

TEST_CASE("ball guard") {
    const DirectionSystem geo = build_direction_system();
    Sym2 r = Sym2::identity();
    r.r12 = geo.eps_gamma * 1.5;
    CHECK_THROWS_AS(geo.gamma_coeffs(SliceParity::Odd, r), OutsideBall);
}

TEST_CASE("smoothness proxy: finite-difference gradient of gamma") {
    const DirectionSystem geo = build_direction_system();
    const auto rows = geo.affine_rows(SliceParity::Odd);
    Sym2 r = Sym2::identity();
    r.r11 += 0.05;
    r.r12 -= 0.03;
    const double h = 1e-6;
    for (int p = 0; p < 3; ++p) {
        Sym2 rp = r, rm = r;
        rp.r12 += h;
        rm.r12 -= h;
        const double gp = std::sqrt(geo.pair_coeffs(SliceParity::Odd, rp)[p]);
        const double gm = std::sqrt(geo.pair_coeffs(SliceParity::Odd, rm)[p]);
        const double fd = (gp - gm) / (2.0 * h);
        const double c = geo.pair_coeffs(SliceParity::Odd, r)[p];
        const double analytic = 0.5 / std::sqrt(c) * rows[p][1];
        CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
    }
}
