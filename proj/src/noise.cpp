#include "noise.hpp"

#include <algorithm>
#include <cmath>

#include "mollify.hpp"

namespace msqg {

double ou_variance(double g, double theta, double t) {
    if (t <= 0.0) return 0.0;
    return g * g * (1.0 - std::exp(-2.0 * theta * t)) / (2.0 * theta);
}

ZProcess solve_stokes_z(const NoiseSpec& spec, double T) {
    ZProcess z;
    z.spec = spec;
    z.t_end = T;

    if (spec.amplitude != 0.0) {
        const int r = int(spec.mode_radius);
        for (int my = 0; my <= r; ++my) {
            for (int mx = (my == 0 ? 1 : -r); mx <= r; ++mx) {
                const double m2 = double(mx) * mx + double(my) * my;
                if (m2 == 0.0 || m2 > spec.mode_radius * spec.mode_radius)
                    continue;
                OUMode m;
                m.mx = mx;
                m.my = my;
                m.g = spec.amplitude *
                      std::pow(m2, -0.5 * spec.decay_exponent());
                m.theta = std::pow(m2, 0.5 * (1.5 - 2.0 * spec.sigma));
                z.modes.push_back(m);
            }
        }
    }

    const auto steps = std::size_t(std::ceil(T / spec.dt));
    z.times.resize(steps + 1);
    z.history.assign(steps + 1, std::vector<cplx>(z.modes.size(), cplx{}));
    for (std::size_t i = 0; i <= steps; ++i) z.times[i] = double(i) * spec.dt;

    // exact exponential update, one complex Gaussian per mode per step
    for (std::size_t i = 1; i <= steps; ++i) {
        const double dt = z.times[i] - z.times[i - 1];
        auto& cur = z.history[i];
        const auto& prev = z.history[i - 1];
        for (std::size_t k = 0; k < z.modes.size(); ++k) {
            const OUMode& m = z.modes[k];
            const double decay = std::exp(-m.theta * dt);
            const double sd =
                m.g * std::sqrt((1.0 - decay * decay) / (2.0 * m.theta) * 0.5);
            const cplx eta(gaussian(z.spec.seed, i, k, 0),
                           gaussian(z.spec.seed, i, k, 1));
            cur[k] = decay * prev[k] + sd * eta;
        }
    }
    return z;
}

double ZProcess::norm_hs_at(std::size_t step, double s) const {
    double acc = 0.0;
    const auto& h = history[step];
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const double m2 = double(modes[k].mx) * modes[k].mx +
                          double(modes[k].my) * modes[k].my;
        acc += 2.0 * std::pow(m2, s) * std::norm(h[k]);  // +-m pair
    }
    return std::sqrt(acc * 4.0 * M_PI * M_PI);
}

double ZProcess::norm_hs_diff(std::size_t i, std::size_t j, double s) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const double m2 = double(modes[k].mx) * modes[k].mx +
                          double(modes[k].my) * modes[k].my;
        acc += 2.0 * std::pow(m2, s) * std::norm(history[i][k] - history[j][k]);
    }
    return std::sqrt(acc * 4.0 * M_PI * M_PI);
}

VectorField ZProcess::field_at(const PeriodicGrid& g, double t,
                               double cut) const {
    VectorField out(g);
    if (t <= 0.0 || zero() || cut <= 0.0) return out;
    const double tc = std::min(t, t_end);
    const double pos = tc / spec.dt;
    const auto i0 = std::min(std::size_t(pos), history.size() - 1);
    const auto i1 = std::min(i0 + 1, history.size() - 1);
    const double w = (i1 == i0) ? 0.0 : pos - double(i0);
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const OUMode& m = modes[k];
        const double mag = std::hypot(double(m.mx), double(m.my));
        if (mag > cut || mag > g.dealias_radius) continue;
        const cplx zeta = (1.0 - w) * history[i0][k] + w * history[i1][k];
        // unit divergence-free direction m_perp/|m|
        const double e1 = -double(m.my) / mag;
        const double e2 = double(m.mx) / mag;
        out.c1.at(m.mx, m.my) = zeta * e1;
        out.c2.at(m.mx, m.my) = zeta * e2;
        out.c1.at(-m.mx, -m.my) = std::conj(zeta) * e1;
        out.c2.at(-m.mx, -m.my) = std::conj(zeta) * e2;
    }
    return out;
}

double ZProcess::trace_sum() const {
    double acc = 0.0;
    for (const auto& m : modes) {
        const double m2 = double(m.mx) * m.mx + double(m.my) * m.my;
        acc += 2.0 * std::pow(m2, 1.75 + 4.0 * spec.sigma) * m.g * m.g;
    }
    return acc;
}

// ---------------------------------------------------------------------------

BrownianPath sample_brownian(double T, double dt, std::uint64_t seed,
                             double amplitude) {
    BrownianPath p;
    p.dt = dt;
    p.seed = seed;
    p.amplitude = amplitude;
    const auto steps = std::size_t(std::ceil(T / dt));
    p.b.assign(steps + 1, 0.0);
    for (std::size_t i = 1; i <= steps; ++i)
        p.b[i] = p.b[i - 1] +
                 amplitude * std::sqrt(dt) * gaussian(seed, i, 0x42, 0);
    return p;
}

double BrownianPath::at(double t) const {
    if (t <= 0.0 || b.empty()) return 0.0;
    const double pos = std::min(t, t_end()) / dt;
    const auto i0 = std::min(std::size_t(pos), b.size() - 1);
    const auto i1 = std::min(i0 + 1, b.size() - 1);
    const double w = (i1 == i0) ? 0.0 : pos - double(i0);
    return (1.0 - w) * b[i0] + w * b[i1];
}

double UpsilonPath::upsilon(double t) const { return std::exp(path->at(t)); }
double UpsilonPath::upsilon_inv(double t) const {
    return std::exp(-path->at(t));
}

double UpsilonPath::upsilon_mollified(double t, double width) const {
    const double dt = path->dt;
    const TimeKernel kernel = TimeKernel::make(width, dt);
    double acc = 0.0;
    for (std::size_t j = 0; j < kernel.weights.size(); ++j)
        acc += kernel.weights[j] *
               std::exp(path->at(t - double(kernel.lag_offset + j) * dt));
    return acc;
}

// ------------------------------- constants ----------------------------------

SobolevConstants measure_sobolev_constants(const PeriodicGrid& g, double sigma,
                                           int probes, std::uint64_t seed) {
    SobolevConstants out;
    double cs = 0.0, c0 = 0.0;
    const double radius = g.dealias_radius / 2.0;
    for (int p = 0; p < probes; ++p) {
        const VectorField f =
            random_band_field(g, radius, counter_hash(seed, p, 1, 1), false);
        const VectorField h =
            random_band_field(g, radius, counter_hash(seed, p, 2, 2), false);
        const VectorField fz = mean_zero(f);
        const double sup = norm_sup(fz);
        const double h1s = norm_hs(fz, 0.5 * (1.0 + sigma));
        if (h1s > 0.0) cs = std::max(cs, sup / h1s);
        // product inequality on scalar components
        const ScalarField fg = product(f.c1, h.c1);
        const double lhs = norm_hs(mean_zero(fg), sigma);
        const double rhs = norm_hs(mean_zero(f.c1), 0.5 * (1.0 + sigma)) *
                           norm_hs(mean_zero(h.c1), 0.5 * (1.0 + sigma));
        if (rhs > 0.0) cs = std::max(cs, lhs / rhs);

        const SymTFField bf = inverse_divergence(f);
        const double bsup = norm_sup(bf);
        const double fsup = norm_sup(f);
        if (fsup > 0.0) c0 = std::max(c0, bsup / fsup);
        const double bh = std::sqrt(std::pow(norm_hs(bf.a11, 1.0 + sigma), 2) +
                                    std::pow(norm_hs(bf.a12, 1.0 + sigma), 2));
        const double fh = norm_hs(mean_zero(f), sigma);
        if (fh > 0.0) c0 = std::max(c0, bh / fh);
    }
    out.c_s = std::max(1.0, 2.0 * cs);
    out.c_0 = 2.0 * c0;
    return out;
}

// ------------------------------ stopping times -------------------------------

StoppingResult stopping_time_additive(const ZProcess& z,
                                      const ParamSchedule& sched,
                                      const SobolevConstants& cst,
                                      double eps_gamma, double delta,
                                      double e_inf) {
    StoppingResult res;
    res.time = std::min(1.0, z.t_end);
    res.binding = "horizon";
    if (z.zero()) {
        res.time = 1.0;
        return res;
    }
    const double s_a = 2.5 + 2.0 * z.spec.sigma;
    const double s_b = 1.75 + 4.0 * z.spec.sigma;
    const double s_c1 = 1.5 + 0.5 * z.spec.sigma;
    const double s_c2 = 1.5 - z.spec.sigma;
    const double hold = 0.5 - 2.0 * delta;
    const double third_rhs =
        eps_gamma / (cst.c_s * 32.0 * 4.0 * M_PI * M_PI) *
        std::exp((1.0 - 2.0 * sched.beta) * double(sched.b) *
                 double(sched.b - 1) * std::log(double(sched.a))) *
        e_inf;

    double holder_running = 0.0;
    double sup_b = 0.0;
    for (std::size_t i = 0; i < z.times.size(); ++i) {
        const double t = z.times[i];
        if (t > 1.0) break;
        sup_b = std::max(sup_b, z.norm_hs_at(i, s_b));
        for (std::size_t gap = 1; gap <= i; gap *= 2) {
            holder_running =
                std::max(holder_running,
                         z.norm_hs_diff(i, i - gap, s_b) /
                             std::pow(double(gap) * z.spec.dt, hold));
        }
        const double cond1 = cst.c_s * z.norm_hs_at(i, s_a);
        const double cond2 = cst.c_s * (sup_b + holder_running);
        const double n1 = z.norm_hs_at(i, s_c1);
        const double n2 = z.norm_hs_at(i, s_c2);
        const double cond3 = cst.c_0 * (cst.c_s * n1 * n1 + 2.0 * n2 * n2);
        if (cond1 >= 1.0) {
            res.time = t;
            res.binding = "sobolev_level";
            return res;
        }
        if (cond2 >= 1.0) {
            res.time = t;
            res.binding = "time_holder";
            return res;
        }
        if (cond3 >= third_rhs) {
            res.time = t;
            res.binding = "energy_budget";
            return res;
        }
    }
    res.time = std::min(1.0, z.t_end);
    return res;
}

MultStopping stopping_time_mult(const BrownianPath& B, double L,
                                double delta) {
    MultStopping out;
    out.m_L = std::sqrt(3.0) * std::pow(L, 0.25) *
              std::exp(0.5 * std::pow(L, 0.25));
    out.t_L = std::min(L, B.t_end());
    out.binding = "horizon";
    const double lvl = std::pow(L, 0.25);
    const double hlvl = std::sqrt(L);
    const double hold = 0.5 - 2.0 * delta;
    double holder_running = 0.0;
    double sup_b = 0.0;
    for (std::size_t i = 0; i < B.b.size(); ++i) {
        const double t = B.dt * double(i);
        if (t > L) break;
        sup_b = std::max(sup_b, std::abs(B.b[i]));
        for (std::size_t gap = 1; gap <= i; gap *= 2)
            holder_running = std::max(
                holder_running, std::abs(B.b[i] - B.b[i - gap]) /
                                    std::pow(double(gap) * B.dt, hold));
        if (std::abs(B.b[i]) >= lvl) {
            out.t_L = t;
            out.binding = "level";
            return out;
        }
        if (sup_b + holder_running >= hlvl) {
            out.t_L = t;
            out.binding = "holder";
            return out;
        }
    }
    return out;
}

}  // namespace msqg
