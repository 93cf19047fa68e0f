#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spectral.hpp"

using namespace msqg;

namespace {

ScalarField make_sin(const PeriodicGrid& g, int axis, int freq) {
    // sin(freq * x_axis) = (e^{i f x} - e^{-i f x}) / (2i)
    ScalarField f(g);
    const cplx half_over_i(0.0, -0.5);
    if (axis == 0) {
        f.at(freq, 0) = half_over_i;
        f.at(-freq, 0) = std::conj(half_over_i);
    } else {
        f.at(0, freq) = half_over_i;
        f.at(0, -freq) = std::conj(half_over_i);
    }
    return f;
}

ScalarField make_cos(const PeriodicGrid& g, int axis, int freq) {
    ScalarField f(g);
    if (axis == 0) {
        f.at(freq, 0) = 0.5;
        f.at(-freq, 0) = 0.5;
    } else {
        f.at(0, freq) = 0.5;
        f.at(0, -freq) = 0.5;
    }
    return f;
}

}  // namespace

TEST_CASE("fractional Laplacian eigenfunctions") {
    const PeriodicGrid g = PeriodicGrid::make(32);
    const ScalarField s = make_sin(g, 0, 1);
    const ScalarField ls = frac_laplacian(s, 1.0);
    CHECK(norm_sup(ls - s) < 1e-13);

    const ScalarField c = make_cos(g, 1, 2);
    const ScalarField lc = frac_laplacian(c, 1.5);
    CHECK(norm_sup(lc - std::pow(2.0, 1.5) * c) < 1e-12);
}

TEST_CASE("fractional Laplacian inverse pair on mean-zero fields") {
    const PeriodicGrid g = PeriodicGrid::make(64);
    const ScalarField f =
        mean_zero(random_band_scalar(g, g.dealias_radius / 2.0, 77));
    const ScalarField back = frac_laplacian(frac_laplacian(f, -1.3), 1.3);
    const double rel = norm_hs(back - f, 0.0) / norm_hs(f, 0.0);
    CHECK(rel < 1e-12);
}

TEST_CASE("negative power requires mean-zero") {
    const PeriodicGrid g = PeriodicGrid::make(32);
    ScalarField f(g);
    f.at(0, 0) = 1.0;
    CHECK_THROWS_AS(frac_laplacian(f, -1.0), NegativePowerOnMean);
}

TEST_CASE("Leray annihilates gradients and fixes solenoidal fields") {
    const PeriodicGrid g = PeriodicGrid::make(64);
    const ScalarField s = random_band_scalar(g, 10.0, 3);
    CHECK(norm_hs(leray(gradient(s)), 0.0) < 1e-12);

    VectorField shear(g);
    shear.c1 = make_sin(g, 1, 1);  // (sin x2, 0)
    const VectorField p = leray(shear);
    CHECK(norm_sup(p - shear) < 1e-13);

    const VectorField f = random_band_field(g, 12.0, 5, false);
    const VectorField p1 = leray(f);
    CHECK(norm_hs(leray(p1) - p1, 0.0) < 1e-12);
    CHECK(norm_hs(divergence(p1), 0.0) < 1e-12);
}

TEST_CASE("inverse divergence: closed-form example") {
    // f = (sin x2, 0) -> entries (0, -cos x2)
    const PeriodicGrid g = PeriodicGrid::make(32);
    VectorField f(g);
    f.c1 = make_sin(g, 1, 1);
    const SymTFField b = inverse_divergence(f);
    CHECK(norm_sup(b.a11) < 1e-13);
    const ScalarField want = -1.0 * make_cos(g, 1, 1);
    CHECK(norm_sup(b.a12 - want) < 1e-13);
}

TEST_CASE("inverse divergence identity and trace") {
    const PeriodicGrid g = PeriodicGrid::make(64);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const VectorField f =
            leray(mean_zero(random_band_field(g, 15.0, seed, false)));
        const SymTFField b = inverse_divergence(f);
        const VectorField back = divergence(b);
        const double rel = norm_hs(back - f, 0.0) / norm_hs(f, 0.0);
        CHECK(rel < 1e-10);
        // trace-free by construction: A22 = -A11 stored implicitly; check
        // symmetry of the realized matrix through the divergence identity
        // of a generic (non-solenoidal) input as well
        const VectorField raw = random_band_field(g, 15.0, seed + 100, false);
        const SymTFField braw = inverse_divergence(raw);
        const VectorField target = leray(mean_zero(raw));
        const double rel2 =
            norm_hs(divergence(braw) - target, 0.0) / norm_hs(target, 0.0);
        CHECK(rel2 < 1e-10);
    }
}

TEST_CASE("band projector: plateau center passes, constants vanish") {
    const PeriodicGrid g = PeriodicGrid::make(128);
    const double lambda = 25.0;
    // the complex building block i k_perp e^{i lambda k.x}, k = (1,0):
    // solenoidal, frequency at the plateau center
    VectorField wave(g);
    wave.c2.at(25, 0) = cplx(0.0, 1.0);
    const VectorField proj = band_project(wave, 1.0, 0.0, lambda);
    CHECK(norm_hs(proj - wave, 0.0) < 1e-13);

    VectorField c(g);
    c.c1.at(0, 0) = 3.0;
    CHECK(norm_hs(band_project(c, 1.0, 0.0, lambda), 0.0) < 1e-14);

    // support annulus is exact on the lattice
    const VectorField f = random_band_field(g, 30.0, 5, false);
    const VectorField pf = band_project(f, 0.6, 0.8, lambda);
    CHECK(mass_outside_annulus(pf, 7.0 * lambda / 8.0, 9.0 * lambda / 8.0) ==
          0.0);
}

TEST_CASE("band projector rejects unresolvable bands") {
    const PeriodicGrid g = PeriodicGrid::make(16);
    VectorField f(g);
    CHECK_THROWS_AS(band_project(f, 1.0, 0.0, 25.0), BandExceedsGrid);
}

TEST_CASE("annulus projector plateau and composition with band projector") {
    const PeriodicGrid g = PeriodicGrid::make(128);
    const double lambda = 25.0;
    ScalarField s(g);
    s.at(25, 0) = 1.0;
    s.at(-25, 0) = 1.0;
    CHECK(norm_sup(annulus_project(s, lambda) - s) < 1e-13);

    ScalarField c(g);
    c.at(0, 0) = 1.0;
    CHECK(norm_hs(annulus_project(c, lambda), 0.0) == 0.0);

    // annulus plateau covers the band: composition is the band projector
    const VectorField f = random_band_field(g, 31.0, 9, false);
    for (const auto& k : {std::pair{1.0, 0.0}, std::pair{0.6, 0.8}}) {
        const VectorField bp = band_project(f, k.first, k.second, lambda);
        const VectorField comp = annulus_project(bp, lambda);
        CHECK(norm_hs(comp - bp, 0.0) < 1e-13);
    }
}

TEST_CASE("sqg nonlinearity identity") {
    const PeriodicGrid g = PeriodicGrid::make(64);
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        const VectorField v = random_band_field(g, 8.0, seed, true);
        const VectorField a = sqg_nonlinearity(v);
        const VectorField b = momentum_nonlinearity(v);
        const double scale = std::max(norm_sup(a), norm_sup(b));
        CHECK(norm_sup(a - b) / scale < 1e-8);
    }
}

TEST_CASE("sqg nonlinearity rejects non-solenoidal input") {
    const PeriodicGrid g = PeriodicGrid::make(32);
    const VectorField v = random_band_field(g, 5.0, 4, false);
    CHECK_THROWS_AS(sqg_nonlinearity(v), NotSolenoidal);
}

TEST_CASE("single plane wave self-interaction is a pure second harmonic") {
    const PeriodicGrid g = PeriodicGrid::make(64);
    VectorField v(g);
    // solenoidal single +-m pair along m_perp, m = (3,4)
    const double e1 = -4.0 / 5.0, e2 = 3.0 / 5.0;
    v.c1.at(3, 4) = 0.5 * e1;
    v.c2.at(3, 4) = 0.5 * e2;
    v.c1.at(-3, -4) = 0.5 * e1;
    v.c2.at(-3, -4) = 0.5 * e2;
    const VectorField n = sqg_nonlinearity(v);
    // mean-zero pure oscillation supported at 0 and +-2m only
    CHECK(std::abs(n.c1.mean_mode()) < 1e-14);
    CHECK(std::abs(n.c2.mean_mode()) < 1e-14);
    double off = 0.0;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const int mx = g.mode(ix), my = g.mode(iy);
            const bool harmonic = (mx == 6 && my == 8) ||
                                  (mx == -6 && my == -8) ||
                                  (mx == 0 && my == 0);
            if (!harmonic)
                off += std::norm(n.c1.at(mx, my)) + std::norm(n.c2.at(mx, my));
        }
    CHECK(off < 1e-24);
    const VectorField m = momentum_nonlinearity(v);
    CHECK(norm_sup(n - m) < 1e-10);
}

TEST_CASE("Parseval round trip") {
    const PeriodicGrid g = PeriodicGrid::make(64);
    const ScalarField f = random_band_scalar(g, 20.0, 31);
    CHECK(energy_physical(f) ==
          doctest::Approx(energy_fourier(f)).epsilon(1e-12));
}

TEST_CASE("Sobolev norm convention frozen on sin x1") {
    // |f_hat(+-1,0)| = 1/2; H^{1/2} norm^2 = (2pi)^2 * (1 * 1/4 * 2) = 2 pi^2
    const PeriodicGrid g = PeriodicGrid::make(32);
    const ScalarField s = make_sin(g, 0, 1);
    CHECK(norm_hs(s, 0.5) * norm_hs(s, 0.5) ==
          doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));
    // matches the quadrature of |Lambda^{1/2} f|^2
    CHECK(energy_physical(frac_laplacian(s, 0.5)) ==
          doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
    ScalarField c(g);
    c.at(0, 0) = 5.0;
    CHECK(norm_hs(c, 0.5) == 0.0);
}

TEST_CASE("multiplier operators commute with truncation") {
    const PeriodicGrid g = PeriodicGrid::make(64);
    const VectorField f = random_band_field(g, 18.0, 55, false);
    const VectorField a = annulus_project(leray(f), 9.0);
    const VectorField b = leray(annulus_project(f, 9.0));
    CHECK(norm_hs(a - b, 0.0) < 1e-12);
}

TEST_CASE("holder seminorm of a ramp follows the gap^{1/2} law") {
    // |t-s| / |t-s|^{1/2} = gap^{1/2}, maximal at the widest dyadic gap
    std::vector<double> ramp(65);
    for (int i = 0; i <= 64; ++i) ramp[i] = i / 64.0;
    const double h = holder_seminorm(ramp, 1.0 / 64.0, 0.5);
    CHECK(h == doctest::Approx(1.0).epsilon(1e-12));
    // halving the span halves the square: widest gap 32 steps
    std::vector<double> half(ramp.begin(), ramp.begin() + 33);
    CHECK(holder_seminorm(half, 1.0 / 64.0, 0.5) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("projector norm probe returns a lambda-independent bound") {
    const PeriodicGrid g = PeriodicGrid::make(64);
    const double c1a = measure_projector_norm(g, {8.0}, 40, 1234);
    const double c1b = measure_projector_norm(g, {8.0, 16.0}, 40, 1234);
    CHECK(c1a > 0.9);  // plateau-centered probes pass through unchanged
    CHECK(c1b >= c1a);
    CHECK(c1b < 10.0);
}
