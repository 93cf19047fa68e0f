#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace msqg {

PeriodicGrid PeriodicGrid::make(int n) {
    if (n < 16 || n % 2 != 0)
        throw ConfigError("grid size must be even and >= 16, got " +
                          std::to_string(n));
    PeriodicGrid g;
    g.n = n;
    g.dealias_radius = n / 3.0;
    return g;
}

// ---------------------------------------------------------------------------
// FFT engine. One cached plan pair per size per thread; FFTW_ESTIMATE picks
// plans deterministically for a fixed size, keeping runs bit-reproducible
// across worker counts.
// ---------------------------------------------------------------------------
namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    fftw_complex* buf = nullptr;
    int n = 0;

    ~PlanPair() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
};

std::mutex plan_mutex;  // fftw plan creation is not thread-safe

PlanPair& plans_for(int n) {
    thread_local std::map<int, PlanPair> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::lock_guard<std::mutex> lock(plan_mutex);
        PlanPair& p = cache[n];
        p.n = n;
        p.buf = fftw_alloc_complex(std::size_t(n) * n);
        p.fwd = fftw_plan_dft_2d(n, n, p.buf, p.buf, FFTW_FORWARD,
                                 FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_2d(n, n, p.buf, p.buf, FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
        return p;
    }
    return it->second;
}

void check_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
    if (!(a == b)) throw ConfigError("grid mismatch between operands");
}

}  // namespace

namespace fft {

std::vector<cplx> synth(const ScalarField& f) {
    const int n = f.grid.n;
    PlanPair& p = plans_for(n);
    auto* b = reinterpret_cast<cplx*>(p.buf);
    std::copy(f.hat.begin(), f.hat.end(), b);
    fftw_execute(p.bwd);  // sign +i: sum hat(m) e^{+i m.x}
    return std::vector<cplx>(b, b + f.grid.size());
}

ScalarField analyze(const PeriodicGrid& g, const std::vector<cplx>& phys) {
    const int n = g.n;
    PlanPair& p = plans_for(n);
    auto* b = reinterpret_cast<cplx*>(p.buf);
    std::copy(phys.begin(), phys.end(), b);
    fftw_execute(p.fwd);
    ScalarField out(g);
    const double scale = 1.0 / double(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out.hat[i] = b[i] * scale;
    return out;
}

std::vector<double> real_samples(const ScalarField& f) {
    auto phys = synth(f);
    std::vector<double> out(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i) out[i] = phys[i].real();
    return out;
}

ScalarField from_real(const PeriodicGrid& g, const std::vector<double>& phys) {
    std::vector<cplx> tmp(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i) tmp[i] = phys[i];
    return analyze(g, tmp);
}

}  // namespace fft

// ---------------------------------------------------------------------------
// multiplier helpers
// ---------------------------------------------------------------------------
namespace {

template <typename Fn>
ScalarField apply_multiplier(const ScalarField& f, Fn&& symbol) {
    ScalarField out(f.grid);
    const int n = f.grid.n;
    for (int iy = 0; iy < n; ++iy) {
        const int my = f.grid.mode(iy);
        for (int ix = 0; ix < n; ++ix) {
            const int mx = f.grid.mode(ix);
            const std::size_t idx = std::size_t(iy) * n + ix;
            out.hat[idx] = f.hat[idx] * symbol(mx, my);
        }
    }
    return out;
}

ScalarField dealias(const ScalarField& f) {
    const double r = f.grid.dealias_radius;
    return apply_multiplier(f, [r](int mx, int my) -> cplx {
        return (std::abs(mx) > r || std::abs(my) > r) ? 0.0 : 1.0;
    });
}

}  // namespace

ScalarField frac_laplacian(const ScalarField& f, double r) {
    if (r < 0.0 && std::abs(f.mean_mode()) > 1e-12)
        throw NegativePowerOnMean(
            "fractional Laplacian with negative power on non-mean-zero field");
    return apply_multiplier(f, [r](int mx, int my) -> cplx {
        const double m2 = double(mx) * mx + double(my) * my;
        if (m2 == 0.0) return r >= 0.0 ? 1.0 : 0.0;  // mean mode passes for r>=0
        return std::pow(m2, 0.5 * r);
    });
}

VectorField frac_laplacian(const VectorField& f, double r) {
    VectorField out;
    out.c1 = frac_laplacian(f.c1, r);
    out.c2 = frac_laplacian(f.c2, r);
    return out;
}

ScalarField mean_zero(const ScalarField& f) {
    ScalarField out = f;
    out.hat[0] = 0.0;
    return out;
}

VectorField mean_zero(const VectorField& f) {
    VectorField out = f;
    out.c1.hat[0] = 0.0;
    out.c2.hat[0] = 0.0;
    return out;
}

VectorField leray(const VectorField& f) {
    VectorField out(f.grid());
    const int n = f.grid().n;
    for (int iy = 0; iy < n; ++iy) {
        const int my = f.grid().mode(iy);
        for (int ix = 0; ix < n; ++ix) {
            const int mx = f.grid().mode(ix);
            const std::size_t idx = std::size_t(iy) * n + ix;
            const double m2 = double(mx) * mx + double(my) * my;
            if (m2 == 0.0) continue;  // output stays mean-zero
            const cplx f1 = f.c1.hat[idx];
            const cplx f2 = f.c2.hat[idx];
            const cplx mdotf = (double(mx) * f1 + double(my) * f2) / m2;
            out.c1.hat[idx] = f1 - double(mx) * mdotf;
            out.c2.hat[idx] = f2 - double(my) * mdotf;
        }
    }
    return out;
}

ScalarField derivative(const ScalarField& f, int axis) {
    return apply_multiplier(f, [axis](int mx, int my) -> cplx {
        return cplx(0.0, axis == 0 ? double(mx) : double(my));
    });
}

VectorField gradient(const ScalarField& f) {
    VectorField out;
    out.c1 = derivative(f, 0);
    out.c2 = derivative(f, 1);
    return out;
}

ScalarField divergence(const VectorField& f) {
    ScalarField out = derivative(f.c1, 0);
    const ScalarField d2 = derivative(f.c2, 1);
    for (std::size_t i = 0; i < out.hat.size(); ++i) out.hat[i] += d2.hat[i];
    return out;
}

VectorField divergence(const SymTFField& r) {
    VectorField out;
    out.c1 = derivative(r.a11, 0) + derivative(r.a12, 1);
    out.c2 = derivative(r.a12, 0) - derivative(r.a11, 1);
    return out;
}

VectorField perp(const VectorField& v) {
    VectorField out;
    out.c1 = -1.0 * v.c2;
    out.c2 = v.c1;
    return out;
}

ScalarField perp_divergence(const VectorField& v) {
    return derivative(v.c2, 0) - derivative(v.c1, 1);
}

SymTFField inverse_divergence(const VectorField& f) {
    const VectorField g = leray(mean_zero(f));
    SymTFField out(f.grid());
    const int n = f.grid().n;
    for (int iy = 0; iy < n; ++iy) {
        const int my = f.grid().mode(iy);
        for (int ix = 0; ix < n; ++ix) {
            const int mx = f.grid().mode(ix);
            const std::size_t idx = std::size_t(iy) * n + ix;
            const double m2 = double(mx) * mx + double(my) * my;
            if (m2 == 0.0) continue;
            const cplx g1 = g.c1.hat[idx];
            const cplx g2 = g.c2.hat[idx];
            const cplx im(0.0, 1.0);
            // (Bf)^{ij} = -d_j Lambda^{-2} g_i - d_i Lambda^{-2} g_j
            out.a11.hat[idx] = -im * (2.0 * double(mx) * g1) / m2;
            out.a12.hat[idx] =
                -im * (double(my) * g1 + double(mx) * g2) / m2;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// band/annulus projectors
// ---------------------------------------------------------------------------

double bump_symbol(double r) {
    constexpr double plateau = 1.0 / 16.0;
    constexpr double support = 1.0 / 8.0;
    if (r <= plateau) return 1.0;
    if (r >= support) return 0.0;
    const double s = (r - plateau) / (support - plateau);
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double annulus_symbol(double r, double lambda) {
    const double lo = lambda / 4.0, plo = 3.0 * lambda / 8.0;
    const double phi = 3.0 * lambda, hi = 4.0 * lambda;
    if (r < lo || r > hi) return 0.0;
    if (r >= plo && r <= phi) return 1.0;
    if (r < plo) {
        const double s = (plo - r) / (plo - lo);
        return std::exp(1.0 - 1.0 / (1.0 - s * s));
    }
    const double s = (r - phi) / (hi - phi);
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

VectorField band_project(const VectorField& f, double kx, double ky,
                         double lambda) {
    if (9.0 * lambda / 8.0 > f.grid().dealias_radius)
        throw BandExceedsGrid("band at lambda=" + std::to_string(lambda) +
                              " exceeds dealias radius " +
                              std::to_string(f.grid().dealias_radius));
    auto symbol = [kx, ky, lambda](int mx, int my) -> cplx {
        const double dx = mx / lambda - kx;
        const double dy = my / lambda - ky;
        return bump_symbol(std::sqrt(dx * dx + dy * dy));
    };
    VectorField out;
    out.c1 = apply_multiplier(f.c1, symbol);
    out.c2 = apply_multiplier(f.c2, symbol);
    return leray(out);
}

ScalarField annulus_project(const ScalarField& f, double lambda) {
    return apply_multiplier(f, [lambda](int mx, int my) -> cplx {
        return annulus_symbol(std::hypot(double(mx), double(my)), lambda);
    });
}

VectorField annulus_project(const VectorField& f, double lambda) {
    VectorField out;
    out.c1 = annulus_project(f.c1, lambda);
    out.c2 = annulus_project(f.c2, lambda);
    return out;
}

// ---------------------------------------------------------------------------
// products and nonlinearity
// ---------------------------------------------------------------------------

ScalarField product(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a.grid, b.grid);
    const auto pa = fft::synth(a);
    const auto pb = fft::synth(b);
    std::vector<cplx> prod(pa.size());
    for (std::size_t i = 0; i < pa.size(); ++i) prod[i] = pa[i] * pb[i];
    return dealias(fft::analyze(a.grid, prod));
}

VectorField sqg_nonlinearity(const VectorField& v) {
    const double vnorm = std::max(norm_hs(v, 0.0), 1e-300);
    const double divnorm = norm_hs(divergence(v), 0.0);
    if (divnorm > 1e-8 * vnorm)
        throw NotSolenoidal("sqg nonlinearity requires a solenoidal field");
    return perp_curl_form(v, v);
}

VectorField perp_curl_form(const VectorField& u_src, const VectorField& v) {
    const VectorField u = frac_laplacian(u_src, 1.0);
    const VectorField up = perp(u);
    const ScalarField curl = perp_divergence(v);
    VectorField out;
    out.c1 = product(up.c1, curl);
    out.c2 = product(up.c2, curl);
    return out;
}

VectorField advect(const VectorField& lambda_a, const VectorField& b) {
    VectorField out;
    out.c1 = product(lambda_a.c1, derivative(b.c1, 0)) +
             product(lambda_a.c2, derivative(b.c1, 1));
    out.c2 = product(lambda_a.c1, derivative(b.c2, 0)) +
             product(lambda_a.c2, derivative(b.c2, 1));
    return out;
}

VectorField grad_transpose_dot(const VectorField& b, const VectorField& a) {
    VectorField out;
    out.c1 = product(derivative(b.c1, 0), a.c1) +
             product(derivative(b.c2, 0), a.c2);
    out.c2 = product(derivative(b.c1, 1), a.c1) +
             product(derivative(b.c2, 1), a.c2);
    return out;
}

VectorField momentum_nonlinearity(const VectorField& v) {
    const VectorField u = frac_laplacian(v, 1.0);
    return advect(u, v) - grad_transpose_dot(v, u);
}

// ---------------------------------------------------------------------------
// norms & diagnostics
// ---------------------------------------------------------------------------

namespace {

bool all_zero(const ScalarField& f) {
    for (const auto& z : f.hat)
        if (z != cplx{}) return false;
    return true;
}

}  // namespace

double norm_sup(const ScalarField& f) {
    if (all_zero(f)) return 0.0;
    const auto phys = fft::synth(f);
    double m = 0.0;
    for (const auto& z : phys) m = std::max(m, std::abs(z));
    return m;
}

double norm_sup(const VectorField& f) {
    if (all_zero(f.c1) && all_zero(f.c2)) return 0.0;
    const auto p1 = fft::synth(f.c1);
    const auto p2 = fft::synth(f.c2);
    double m = 0.0;
    for (std::size_t i = 0; i < p1.size(); ++i)
        m = std::max(m, std::sqrt(std::norm(p1[i]) + std::norm(p2[i])));
    return m;
}

double norm_sup(const SymTFField& f) {
    if (all_zero(f.a11) && all_zero(f.a12)) return 0.0;
    const auto p1 = fft::synth(f.a11);
    const auto p2 = fft::synth(f.a12);
    double m = 0.0;
    for (std::size_t i = 0; i < p1.size(); ++i)
        m = std::max(m, std::max(std::abs(p1[i].real()),
                                 std::abs(p2[i].real())));
    return m;
}

double norm_hs(const ScalarField& f, double s) {
    const int n = f.grid.n;
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const int my = f.grid.mode(iy);
        for (int ix = 0; ix < n; ++ix) {
            const int mx = f.grid.mode(ix);
            const std::size_t idx = std::size_t(iy) * n + ix;
            const double a2 = std::norm(f.hat[idx]);
            if (a2 == 0.0) continue;
            const double m2 = double(mx) * mx + double(my) * my;
            if (m2 == 0.0) {
                if (s == 0.0) acc += a2;
                continue;
            }
            if (s == 0.0)
                acc += a2;
            else if (s == 0.5)
                acc += std::sqrt(m2) * a2;
            else if (s == 1.0)
                acc += m2 * a2;
            else
                acc += std::pow(m2, s) * a2;
        }
    }
    return std::sqrt(acc * 4.0 * M_PI * M_PI);
}

double norm_hs(const VectorField& f, double s) {
    const double a = norm_hs(f.c1, s);
    const double b = norm_hs(f.c2, s);
    return std::sqrt(a * a + b * b);
}

double norm_c1(const VectorField& f) {
    double g = 0.0;
    g = std::max(g, norm_sup(gradient(f.c1)));
    g = std::max(g, norm_sup(gradient(f.c2)));
    return norm_sup(f) + g;
}

double holder_seminorm(const std::vector<double>& values, double dt,
                       double exponent) {
    const std::size_t n = values.size();
    double best = 0.0;
    for (std::size_t gap = 1; gap < n; gap *= 2) {
        const double denom = std::pow(gap * dt, exponent);
        for (std::size_t i = 0; i + gap < n; ++i)
            best = std::max(best,
                            std::abs(values[i + gap] - values[i]) / denom);
    }
    return best;
}

double energy_physical(const ScalarField& f) {
    const auto phys = fft::synth(f);
    const double w = f.grid.spacing() * f.grid.spacing();
    double acc = 0.0;
    for (const auto& z : phys) acc += z.real() * z.real();
    return acc * w;
}

double energy_fourier(const ScalarField& f) {
    double acc = 0.0;
    for (const auto& z : f.hat) acc += std::norm(z);
    return acc * 4.0 * M_PI * M_PI;
}

ScalarField ball_truncate(const ScalarField& f, double radius) {
    const double r2 = radius * radius;
    return apply_multiplier(f, [r2](int mx, int my) -> cplx {
        return (double(mx) * mx + double(my) * my > r2) ? 0.0 : 1.0;
    });
}

VectorField ball_truncate(const VectorField& f, double radius) {
    VectorField out;
    out.c1 = ball_truncate(f.c1, radius);
    out.c2 = ball_truncate(f.c2, radius);
    return out;
}

SymTFField ball_truncate(const SymTFField& f, double radius) {
    SymTFField out;
    out.a11 = ball_truncate(f.a11, radius);
    out.a12 = ball_truncate(f.a12, radius);
    return out;
}

double mass_outside_annulus(const ScalarField& f, double lo, double hi) {
    const int n = f.grid.n;
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const int my = f.grid.mode(iy);
        for (int ix = 0; ix < n; ++ix) {
            const int mx = f.grid.mode(ix);
            const double r = std::hypot(double(mx), double(my));
            if (r < lo || r > hi)
                acc += std::norm(f.hat[std::size_t(iy) * n + ix]);
        }
    }
    return acc;
}

double mass_outside_annulus(const VectorField& f, double lo, double hi) {
    return mass_outside_annulus(f.c1, lo, hi) +
           mass_outside_annulus(f.c2, lo, hi);
}

double mass_outside_ball(const VectorField& f, double radius) {
    return mass_outside_annulus(f, 0.0, radius);
}

double mass_outside_ball(const SymTFField& f, double radius) {
    return mass_outside_annulus(f.a11, 0.0, radius) +
           mass_outside_annulus(f.a12, 0.0, radius);
}

double support_overlap(const VectorField& f, const VectorField& g) {
    check_same_grid(f.grid(), g.grid());
    double acc = 0.0;
    for (std::size_t i = 0; i < f.c1.hat.size(); ++i) {
        const double mf = std::norm(f.c1.hat[i]) + std::norm(f.c2.hat[i]);
        const double mg = std::norm(g.c1.hat[i]) + std::norm(g.c2.hat[i]);
        if (mf > 0.0 && mg > 0.0) acc += mf * mg;
    }
    return acc;
}

double imag_residue(const ScalarField& f) {
    const auto phys = fft::synth(f);
    double m = 0.0;
    for (const auto& z : phys) m = std::max(m, std::abs(z.imag()));
    return m;
}

// ---------------------------------------------------------------------------
// random band-limited probes (deterministic in the seed)
// ---------------------------------------------------------------------------

ScalarField random_band_scalar(const PeriodicGrid& g, double radius,
                               std::uint64_t seed) {
    ScalarField f(g);
    const int r = int(radius);
    for (int my = -r; my <= r; ++my) {
        for (int mx = -r; mx <= r; ++mx) {
            if (mx == 0 && my == 0) continue;
            if (double(mx) * mx + double(my) * my > radius * radius) continue;
            // fill one representative per conjugate pair
            if (my < 0 || (my == 0 && mx < 0)) continue;
            const std::uint64_t key =
                std::uint64_t(std::uint32_t(mx)) << 32 | std::uint32_t(my);
            const cplx a(gaussian(seed, key, 0, 0), gaussian(seed, key, 1, 0));
            f.at(mx, my) = a;
            f.at(-mx, -my) = std::conj(a);
        }
    }
    const double s = norm_sup(f);
    if (s > 0.0)
        for (auto& z : f.hat) z /= s;
    return f;
}

VectorField random_band_field(const PeriodicGrid& g, double radius,
                              std::uint64_t seed, bool solenoidal) {
    VectorField f(g);
    f.c1 = random_band_scalar(g, radius, seed);
    f.c2 = random_band_scalar(g, radius, mix64(seed ^ 0xABCDEF12345ull));
    if (solenoidal) f = leray(f);
    const double s = norm_sup(f);
    if (s > 0.0) {
        for (auto& z : f.c1.hat) z /= s;
        for (auto& z : f.c2.hat) z /= s;
    }
    return f;
}

namespace {

/// Random complex vector field with one-sided spectrum concentrated around
/// the center mode (amplitude decay 1/(1+|d|^2)), C0-normalized. This is the
/// building-block class the band projector acts on in the scheme.
VectorField random_shifted_field(const PeriodicGrid& g, int cx, int cy,
                                 double radius, std::uint64_t seed) {
    VectorField f(g);
    const int r = int(radius) + 1;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double d2 = double(dx) * dx + double(dy) * dy;
            if (d2 > radius * radius) continue;
            const int mx = cx + dx, my = cy + dy;
            if (std::abs(mx) > g.dealias_radius ||
                std::abs(my) > g.dealias_radius)
                continue;
            const std::uint64_t key =
                std::uint64_t(std::uint32_t(mx)) << 32 | std::uint32_t(my);
            const double decay = 1.0 / (1.0 + d2);
            for (int comp = 0; comp < 2; ++comp) {
                ScalarField& c = comp == 0 ? f.c1 : f.c2;
                c.at(mx, my) += decay * cplx(gaussian(seed, key, comp, 0),
                                             gaussian(seed, key, comp, 1));
            }
        }
    }
    const double s = norm_sup(f);
    if (s > 0.0) {
        for (auto& z : f.c1.hat) z /= s;
        for (auto& z : f.c2.hat) z /= s;
    }
    return f;
}

}  // namespace

double measure_projector_norm(const PeriodicGrid& g,
                              const std::vector<double>& lambdas, int probes,
                              std::uint64_t seed) {
    static const double dirs[6][2] = {{1, 0},          {0.6, 0.8},
                                      {0.6, -0.8},     {0, 1},
                                      {0.8, 0.6},      {-0.8, 0.6}};
    double best = 0.0;
    for (double lambda : lambdas) {
        for (const auto& d : dirs) {
            const int cx = int(std::lround(lambda * d[0]));
            const int cy = int(std::lround(lambda * d[1]));
            const std::uint64_t dir_key =
                std::uint64_t(std::uint32_t(cx)) << 32 | std::uint32_t(cy);
            // the pure plateau-centered wave passes through unchanged
            VectorField pure(g);
            pure.c1.at(cx, cy) = cplx(0.0, -d[1]);
            pure.c2.at(cx, cy) = cplx(0.0, d[0]);
            best = std::max(best,
                            norm_sup(band_project(pure, d[0], d[1], lambda)));
            for (int p = 0; p < probes; ++p) {
                const VectorField f = random_shifted_field(
                    g, cx, cy, lambda / 4.0,
                    counter_hash(seed, dir_key, p, 7));
                const double nf = norm_sup(f);
                if (nf == 0.0) continue;
                const VectorField pf = band_project(f, d[0], d[1], lambda);
                best = std::max(best, norm_sup(pf) / nf);
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// algebra
// ---------------------------------------------------------------------------

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a.grid, b.grid);
    ScalarField out = a;
    for (std::size_t i = 0; i < out.hat.size(); ++i) out.hat[i] += b.hat[i];
    return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a.grid, b.grid);
    ScalarField out = a;
    for (std::size_t i = 0; i < out.hat.size(); ++i) out.hat[i] -= b.hat[i];
    return out;
}

ScalarField operator*(double s, const ScalarField& a) {
    ScalarField out = a;
    for (auto& z : out.hat) z *= s;
    return out;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    VectorField out;
    out.c1 = a.c1 + b.c1;
    out.c2 = a.c2 + b.c2;
    return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    VectorField out;
    out.c1 = a.c1 - b.c1;
    out.c2 = a.c2 - b.c2;
    return out;
}

VectorField operator*(double s, const VectorField& a) {
    VectorField out;
    out.c1 = s * a.c1;
    out.c2 = s * a.c2;
    return out;
}

SymTFField operator+(const SymTFField& a, const SymTFField& b) {
    SymTFField out;
    out.a11 = a.a11 + b.a11;
    out.a12 = a.a12 + b.a12;
    return out;
}

SymTFField operator-(const SymTFField& a, const SymTFField& b) {
    SymTFField out;
    out.a11 = a.a11 - b.a11;
    out.a12 = a.a12 - b.a12;
    return out;
}

SymTFField operator*(double s, const SymTFField& a) {
    SymTFField out;
    out.a11 = s * a.a11;
    out.a12 = s * a.a12;
    return out;
}

void eval_at_points(const ScalarField& f, const std::vector<double>& xy,
                    std::vector<cplx>& out) {
    const std::size_t npts = xy.size() / 2;
    out.assign(npts, cplx{});
    const int n = f.grid.n;
    for (int iy = 0; iy < n; ++iy) {
        const int my = f.grid.mode(iy);
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t idx = std::size_t(iy) * n + ix;
            const cplx c = f.hat[idx];
            if (c == cplx{}) continue;
            const int mx = f.grid.mode(ix);
            for (std::size_t p = 0; p < npts; ++p) {
                const double phase = mx * xy[2 * p] + my * xy[2 * p + 1];
                out[p] += c * cplx(std::cos(phase), std::sin(phase));
            }
        }
    }
}

}  // namespace msqg
