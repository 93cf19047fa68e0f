#include "iterate.hpp"

#include <algorithm>
#include <cmath>

namespace msqg {

// ------------------------------ energy profile -------------------------------

EnergyProfile EnergyProfile::affine(double d0, double d1) {
    if (!(d1 > 0.0) || !(d0 > 2.0 * d1 + 4.0))
        throw ConfigError("affine energy requires d1 > 0 and d0 > 2 d1 + 4");
    EnergyProfile e;
    e.kind = Kind::Affine;
    e.d0 = d0;
    e.d1 = d1;
    return e;
}

EnergyProfile EnergyProfile::exponential(double d0, double d1) {
    if (!(d1 > 0.0) || !(d0 > 4.0 * std::exp(2.0 * d1)))
        throw ConfigError(
            "exponential energy requires d1 > 0 and d0 > 4 e^{2 d1}");
    EnergyProfile e;
    e.kind = Kind::Exponential;
    e.d0 = d0;
    e.d1 = d1;
    return e;
}

EnergyProfile EnergyProfile::sampled(std::vector<double> ts,
                                     std::vector<double> es) {
    if (ts.size() != es.size() || ts.size() < 2)
        throw ConfigError("sampled energy needs matching t/e tables");
    EnergyProfile e;
    e.kind = Kind::Sampled;
    e.ts = std::move(ts);
    e.es = std::move(es);
    for (double v : e.es)
        if (!(v > 4.0)) throw ConfigError("sampled energy must stay > 4");
    return e;
}

double EnergyProfile::at(double t) const {
    switch (kind) {
        case Kind::Affine:
            return d0 + d1 * t;
        case Kind::Exponential:
            return d0 * std::exp(d1 * t);
        case Kind::Sampled: {
            if (t <= ts.front()) return es.front();
            if (t >= ts.back()) return es.back();
            auto it = std::upper_bound(ts.begin(), ts.end(), t);
            const std::size_t i = std::size_t(it - ts.begin());
            const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
            return (1.0 - w) * es[i - 1] + w * es[i];
        }
    }
    return d0;
}

double EnergyProfile::deriv(double t) const {
    switch (kind) {
        case Kind::Affine:
            return d1;
        case Kind::Exponential:
            return d0 * d1 * std::exp(d1 * t);
        case Kind::Sampled: {
            const double h = 1e-4;
            return (at(t + h) - at(t - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

double EnergyProfile::sup(double lo, double hi) const {
    double m = 0.0;
    for (int i = 0; i <= 256; ++i)
        m = std::max(m, at(lo + (hi - lo) * i / 256.0));
    return m;
}

double EnergyProfile::inf(double lo, double hi) const {
    double m = HUGE_VAL;
    for (int i = 0; i <= 256; ++i)
        m = std::min(m, at(lo + (hi - lo) * i / 256.0));
    return m;
}

double EnergyProfile::deriv_sup(double lo, double hi) const {
    double m = 0.0;
    for (int i = 0; i <= 256; ++i)
        m = std::max(m, std::abs(deriv(lo + (hi - lo) * i / 256.0)));
    return m;
}

// ------------------------------ cutoff family --------------------------------

double CutoffFamily::bump(double u) {
    const double a = std::abs(u);
    if (a <= 0.25) return 1.0;
    if (a >= 1.0) return 0.0;
    const double s = (a - 0.25) / 0.75;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

CutoffFamily CutoffFamily::make(double tau, double t_lo, double t_hi) {
    CutoffFamily c;
    c.tau = tau;
    c.j_min = int(std::floor(t_lo / tau));
    c.j_max = int(std::ceil(t_hi / tau));
    return c;
}

double CutoffFamily::chi(int j, double t) const {
    const double u = t / tau - j;
    const double raw = bump(u);
    if (raw == 0.0) return 0.0;
    // neighbours overlapping u: floor(u) and ceil(u) only
    const int base = int(std::floor(t / tau));
    double sum = 0.0;
    for (int jj = base - 1; jj <= base + 1; ++jj) {
        const double r = bump(t / tau - jj);
        sum += r * r;
    }
    return raw / std::sqrt(sum);
}

double CutoffFamily::partition_sum(double t) const {
    double acc = 0.0;
    const int base = int(std::floor(t / tau));
    for (int jj = base - 1; jj <= base + 1; ++jj) {
        const double c = chi(jj, t);
        acc += c * c;
    }
    return acc;
}

std::vector<int> CutoffFamily::active(double t) const {
    std::vector<int> out;
    const int base = int(std::floor(t / tau));
    for (int jj = base - 1; jj <= base + 1; ++jj)
        if (chi(jj, t) != 0.0 && jj >= j_min && jj <= j_max) out.push_back(jj);
    return out;
}

// ------------------------------ iteration state ------------------------------

struct IterationState::Cache {
    LruCache<VectorField> y{12};
    LruCache<SymTFField> r{6};
    LruCache<ScalarField> p{6};
};

IterationState::IterationState() : cache_(std::make_shared<Cache>()) {}

VectorField IterationState::y(double t) const {
    if (auto hit = cache_->y.get(t)) return *hit;
    VectorField v = y_fn(t);
    cache_->y.put(t, v);
    return v;
}

SymTFField IterationState::stress(double t) const {
    if (auto hit = cache_->r.get(t)) return *hit;
    SymTFField v = r_fn(t);
    cache_->r.put(t, v);
    return v;
}

ScalarField IterationState::pressure(double t) const {
    if (auto hit = cache_->p.get(t)) return *hit;
    ScalarField v = p_fn(t);
    cache_->p.put(t, v);
    return v;
}

IterationState base_step(NoiseMode mode, const ParamSchedule& sched,
                         const PeriodicGrid& grid, const ZProcess* z,
                         double t_stop) {
    IterationState s;
    s.q = 0;
    s.mode = mode;
    s.grid = grid;
    s.t_start = sched.t_start[0];
    s.t_stop = t_stop;
    const double gamma = sched.gamma;
    const double sigma = sched.sigma;
    const double cut0 = sched.f_cut[0];

    s.y_fn = [grid](double) { return VectorField(grid); };
    s.p_fn = [grid](double) { return ScalarField(grid); };
    if (mode == NoiseMode::Multiplicative || z == nullptr) {
        s.r_fn = [grid](double) { return SymTFField(grid); };
    } else {
        const ZProcess* zp = z;
        const double lam0 = sched.lambda[0].value;
        s.r_fn = [grid, zp, gamma, sigma, cut0, lam0](double t) {
            const VectorField z0 = zp->field_at(grid, t, cut0);
            VectorField arg = perp_curl_form(z0, z0) +
                              frac_laplacian(z0, gamma) -
                              frac_laplacian(z0, 1.5 - 2.0 * sigma);
            // provable support: products of the truncated z live inside
            // B(0, 2 f(0)) c B(0, 4 lambda_0); drop FFT round-off dust
            return ball_truncate(inverse_divergence(arg), 4.0 * lam0);
        };
    }
    return s;
}

// ------------------------------ stage workspace ------------------------------

StageWorkspace::StageWorkspace(const StageInputs& in, const IterationState& prev)
    : in_(in),
      prev_(prev),
      yl_cache_(8),
      w_cache_(12),
      zl_cache_(8),
      rl_cache_(6) {
    const auto& s = *in_.sched;
    const int q = in_.q;
    tau_ = s.tau[q + 1].value;
    ell_ = s.ell[q + 1].value;
    lambda_next_ = s.lambda[q + 1].value;
    t_lo_ = s.t_start[q + 1];
    grid_dt_ = tau_ / in_.samples_per_slice;
    cut_ = CutoffFamily::make(tau_, t_lo_, in_.t_stop);
    tkernel_ = TimeKernel::make(tau_, tau_ / in_.kernel_taps);
    ups_.path = in_.brownian;
    grid_points(in_.grid, px_, py_);

    if (2.0 * lambda_next_ > in_.grid.dealias_radius)
        throw BandExceedsGrid(
            "perturbation support 2*lambda exceeds the dealias radius; need a "
            "larger grid");
}

const std::vector<cplx>& StageWorkspace::modulation(double kx,
                                                    double ky) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(kx, ky);
    auto it = modulation_.find(key);
    if (it != modulation_.end()) return it->second;
    std::vector<cplx> mod(in_.grid.size());
    const double lam = lambda_next_;
    for (std::size_t i = 0; i < mod.size(); ++i) {
        const double ph = lam * (kx * px_[i] + ky * py_[i]);
        mod[i] = cplx(std::cos(ph), std::sin(ph));
    }
    return modulation_.emplace(key, std::move(mod)).first->second;
}

VectorField StageWorkspace::y_l(double t) const {
    if (auto hit = yl_cache_.get(t)) return *hit;
    VectorField acc(in_.grid);
    for (std::size_t i = 0; i < tkernel_.weights.size(); ++i) {
        const double lag = double(tkernel_.lag_offset + i) * tkernel_.dt;
        acc = acc + tkernel_.weights[i] * prev_.y(t - lag);
    }
    VectorField out = mollify_space(acc, ell_);
    yl_cache_.put(t, out);
    return out;
}

SymTFField StageWorkspace::r_l(double t) const {
    if (auto hit = rl_cache_.get(t)) return *hit;
    SymTFField acc(in_.grid);
    for (std::size_t i = 0; i < tkernel_.weights.size(); ++i) {
        const double lag = double(tkernel_.lag_offset + i) * tkernel_.dt;
        acc = acc + tkernel_.weights[i] * prev_.stress(t - lag);
    }
    SymTFField out = mollify_space(acc, ell_);
    rl_cache_.put(t, out);
    return out;
}

ScalarField StageWorkspace::p_l(double t) const {
    ScalarField acc(in_.grid);
    for (std::size_t i = 0; i < tkernel_.weights.size(); ++i) {
        const double lag = double(tkernel_.lag_offset + i) * tkernel_.dt;
        acc = acc + tkernel_.weights[i] * prev_.pressure(t - lag);
    }
    return mollify_space(acc, ell_);
}

VectorField StageWorkspace::z_trunc(double t, int stage) const {
    if (in_.z == nullptr) return VectorField(in_.grid);
    return in_.z->field_at(in_.grid, t, in_.sched->f_cut[stage]);
}

VectorField StageWorkspace::z_l(double t) const {
    if (auto hit = zl_cache_.get(t)) return *hit;
    VectorField acc(in_.grid);
    for (std::size_t i = 0; i < tkernel_.weights.size(); ++i) {
        const double lag = double(tkernel_.lag_offset + i) * tkernel_.dt;
        acc = acc + tkernel_.weights[i] * z_trunc(t - lag, in_.q);
    }
    VectorField out = mollify_space(acc, ell_);
    zl_cache_.put(t, out);
    return out;
}

double StageWorkspace::upsilon(double t) const {
    return in_.brownian ? ups_.upsilon(t) : 1.0;
}
double StageWorkspace::upsilon_inv(double t) const {
    return in_.brownian ? ups_.upsilon_inv(t) : 1.0;
}
double StageWorkspace::upsilon_l(double t) const {
    return in_.brownian ? ups_.upsilon_mollified(t, tau_) : 1.0;
}

double StageWorkspace::energy_gap_raw(double t) const {
    const auto& s = *in_.sched;
    const double e = in_.energy->at(t);
    const double lam_del = s.lambda_delta(in_.q + 2);
    const double four_pi2 = 4.0 * M_PI * M_PI;
    if (in_.mode == NoiseMode::Additive) {
        const VectorField sum = prev_.y(t) + z_trunc(t, in_.q);
        const double n2 = std::pow(norm_hs(sum, 0.5), 2);
        return (e * (1.0 - lam_del) - n2) / (4.0 * four_pi2);
    }
    const double u = upsilon(t);
    const double n2 = std::pow(norm_hs(prev_.y(t), 0.5), 2);
    return upsilon_l(t) / (u * u * 4.0 * four_pi2) *
           (e * (1.0 - lam_del) - u * u * n2);
}

double StageWorkspace::energy_gap(double t) const {
    const double g = energy_gap_raw(t);
    if (g < 0.0) {
        std::lock_guard<std::mutex> lock(mu_);
        ++clip_events_;
        return 0.0;
    }
    return g;
}

double StageWorkspace::gamma_l(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < tkernel_.weights.size(); ++i) {
        const double lag = double(tkernel_.lag_offset + i) * tkernel_.dt;
        acc += tkernel_.weights[i] * energy_gap(t - lag);
    }
    return acc;
}

SliceData& StageWorkspace::slice(int j) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = slices_.find(j);
        if (it != slices_.end()) return *it->second;
    }
    return build_slice(j);
}

SliceData& StageWorkspace::build_slice(int j) const {
    auto sd = std::make_unique<SliceData>();
    sd->j = j;
    sd->anchor = cut_.anchor(j);
    sd->r_anchor = r_l(sd->anchor);
    sd->r11 = SparseScalar::from(sd->r_anchor.a11);
    sd->r12 = SparseScalar::from(sd->r_anchor.a12);
    sd->r_anchor_norm = norm_sup(sd->r_anchor);
    sd->gamma_l_anchor = gamma_l(sd->anchor);

    const double eps = in_.geo->eps_gamma;
    sd->rho = std::sqrt(ell_ * ell_ + sd->r_anchor_norm * sd->r_anchor_norm) /
                  eps +
              sd->gamma_l_anchor;

    // drift samples across the slice window (flows only read +-tau around
    // the anchor)
    const int per_tau = in_.flow_samples_per_slice;
    const int count = 2 * per_tau + 1;
    sd->drift.t0 = sd->anchor - tau_;
    sd->drift.dt = tau_ / per_tau;
    sd->drift.samples.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double ts = sd->drift.t0 + sd->drift.dt * i;
        sd->drift.samples.push_back(SparseVector::from(drift_field(ts)));
    }
    double dt_flow = tau_ / in_.flow_samples_per_slice;
    const double vmax = sd->drift.sup_bound();
    if (vmax > 0.0)
        dt_flow = std::min(dt_flow, 0.5 * in_.grid.spacing() / vmax);
    sd->flow = std::make_unique<FlowMap>(FlowMap::make(
        in_.grid, j, sd->anchor, sd->drift, dt_flow, in_.workers));

    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = slices_.emplace(j, std::move(sd));
    return *it->second;
}

VectorField StageWorkspace::drift_field(double t) const {
    if (in_.mode == NoiseMode::Additive) {
        return frac_laplacian(y_l(t), 1.0) + frac_laplacian(z_l(t), 1.0);
    }
    return upsilon_l(t) * frac_laplacian(y_l(t), 1.0);
}

StageWorkspace::WaveData StageWorkspace::waves(int j, double t) const {
    WaveData wd;
    SliceData& sd = slice(j);
    const SliceParity parity =
        (j % 2 != 0) ? SliceParity::Odd : SliceParity::Even;
    const auto& dirs = in_.geo->directions(parity);
    const auto rows = in_.geo->affine_rows(parity);
    const double eps = in_.geo->eps_gamma;

    std::vector<double> dx, dy;
    sd.flow->displacement(t, dx, dy);
    const bool still = sd.drift.sup_bound() == 0.0;

    std::vector<double> r11v, r12v;
    transported_values(sd.r11, in_.grid, dx, dy, r11v);
    transported_values(sd.r12, in_.grid, dx, dy, r12v);

    const double rho = sd.rho;
    const double amp_scale =
        std::sqrt(rho / lambda_next_) *
        (in_.mode == NoiseMode::Multiplicative
             ? 1.0 / std::sqrt(upsilon_l(t))
             : 1.0);

    wd.amplitude.assign(3, std::vector<double>(in_.grid.size()));
    for (int p = 0; p < 3; ++p) {
        wd.k[p] = {dirs[2 * p].fx(), dirs[2 * p].fy()};
        const double base = rows[p][0] + rows[p][2];  // c_p(Id)
        const double ca = rows[p][2] - rows[p][0];
        const double cb = -rows[p][1];
        auto& amp = wd.amplitude[p];
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double c = base + (ca * r11v[i] + cb * r12v[i]) / rho;
            if (c < 0.0)
                throw OutsideBall(
                    "transported stress left the positivity ball");
            amp[i] = amp_scale * std::sqrt(c);
        }
        if (still)
            wd.psi[p].assign(in_.grid.size(), cplx(1.0, 0.0));
        else
            phase_from_displacement(dx, dy, lambda_next_, wd.k[p][0],
                                    wd.k[p][1], wd.psi[p]);
    }

    // re-check the ball condition
    double worst = 0.0;
    for (std::size_t i = 0; i < r11v.size(); ++i)
        worst = std::max(worst,
                         std::max(std::abs(r11v[i]), std::abs(r12v[i])) / rho);
    if (worst > eps * (1.0 + 1e-9))
        throw OutsideBall("||R/rho|| exceeded eps_gamma");
    return wd;
}

VectorField StageWorkspace::w(double t) const {
    if (auto hit = w_cache_.get(t)) return *hit;
    const PeriodicGrid& g = in_.grid;
    VectorField acc(g);
    const double lam = lambda_next_;

    for (int j : cut_.active(t)) {
        const double chi = cut_.chi(j, t);
        if (chi == 0.0) continue;
        const WaveData wd = waves(j, t);
        for (int p = 0; p < 3; ++p) {
            const double kx = wd.k[p][0], ky = wd.k[p][1];
            const auto& mod = modulation(kx, ky);
            // modulated profile chi a psi e^{i lam k.x}
            std::vector<cplx> prof(g.size());
            for (std::size_t i = 0; i < prof.size(); ++i)
                prof[i] = chi * wd.amplitude[p][i] * wd.psi[p][i] * mod[i];
            const ScalarField phat = fft::analyze(g, prof);
            // band symbol support box around lam k
            const int n = g.n;
            const int cx = int(std::lround(lam * kx));
            const int cy = int(std::lround(lam * ky));
            const int rad = int(lam / 8.0) + 2;
            const double px = -ky, py = kx;  // k_perp
            for (int my = cy - rad; my <= cy + rad; ++my) {
                for (int mx = cx - rad; mx <= cx + rad; ++mx) {
                    if (std::abs(mx) > n / 2 - 1 || std::abs(my) > n / 2 - 1)
                        continue;
                    const double ddx = mx / lam - kx;
                    const double ddy = my / lam - ky;
                    const double s = bump_symbol(std::hypot(ddx, ddy));
                    if (s == 0.0) continue;
                    const cplx v = phat.at(mx, my) * s * cplx(0.0, 1.0);
                    cplx v1 = v * px, v2 = v * py;
                    const double m2 = double(mx) * mx + double(my) * my;
                    if (m2 > 0.0) {  // Leray
                        const cplx mdot =
                            (double(mx) * v1 + double(my) * v2) / m2;
                        v1 -= double(mx) * mdot;
                        v2 -= double(my) * mdot;
                    }
                    acc.c1.at(mx, my) += v1;
                    acc.c2.at(mx, my) += v2;
                    acc.c1.at(-mx, -my) += std::conj(v1);
                    acc.c2.at(-mx, -my) += std::conj(v2);
                }
            }
        }
    }
    w_cache_.put(t, acc);
    return acc;
}

VectorField StageWorkspace::y_next(double t) const { return y_l(t) + w(t); }

ScalarField StageWorkspace::p_next(double t) const {
    const VectorField wt = w(t);
    if (in_.mode == NoiseMode::Additive) {
        const VectorField lam_yz =
            frac_laplacian(y_l(t) + z_trunc(t, in_.q + 1), 1.0);
        return p_l(t) + product(wt.c1, lam_yz.c1) + product(wt.c2, lam_yz.c2);
    }
    const VectorField lam_y = frac_laplacian(y_l(t), 1.0);
    return p_l(t) + upsilon_l(t) * (product(wt.c1, lam_y.c1) +
                                    product(wt.c2, lam_y.c2));
}

double StageWorkspace::quadrature_sum(double t) const {
    double acc = 0.0;
    for (int j : cut_.active(t)) {
        const double chi = cut_.chi(j, t);
        acc += 4.0 * chi * chi * slice(j).rho * 4.0 * M_PI * M_PI;
    }
    if (in_.mode == NoiseMode::Multiplicative) acc /= upsilon_l(t);
    return acc;
}

// ----------------------------- inductive checking ----------------------------

InductiveScan check_inductive(const IterationState& state,
                              const EnergyProfile& e,
                              const ParamSchedule& sched,
                              const DirectionSystem& geo, double m0,
                              const ZProcess* z, const UpsilonPath* ups,
                              double m_L, const std::vector<double>& times,
                              const InductiveOptions& opts) {
    InductiveScan scan;
    scan.report.q = state.q;
    const int q = state.q;
    const bool mult = state.mode == NoiseMode::Multiplicative;
    const double ebar = e.sup(-2.0, std::max(1.0, state.t_stop));

    const double lam_q = sched.lambda[q].value;
    const double del_q = sched.delta[q].value;
    const double lamdel_q1 = sched.lambda_delta(q + 1);
    const double lamdel_q2 = sched.lambda_delta(q + 2);
    const double eps32 = geo.eps_gamma / (32.0 * 4.0 * M_PI * M_PI);

    double sup_y = 0.0, sup_c1 = 0.0, sup_dty = 0.0;
    double mass_y = 0.0, mass_r = 0.0;
    double stress_ratio = 0.0;
    double ratio_min = HUGE_VAL, ratio_max = -HUGE_VAL;

    // mollification scales for the material derivative at this stage
    const double ell = sched.ell[q + 1].value;
    const double tau = sched.tau[q + 1].value;
    const TimeKernel tk = TimeKernel::make(tau, tau / opts.kernel_taps);
    const double fd_h = tau / 8.0;

    const std::size_t sup_stride = std::max(1, opts.sup_stride);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        const VectorField yt = state.y(t);
        const double et = e.at(t);

        mass_y = std::max(mass_y, mass_outside_ball(yt, 2.0 * lam_q));
        if (ti % sup_stride == 0) {
            const SymTFField rt = state.stress(t);
            sup_y = std::max(sup_y, norm_sup(yt));
            sup_c1 = std::max(
                sup_c1, norm_c1(yt) + norm_sup(frac_laplacian(yt, 1.0)));
            mass_r = std::max(mass_r, mass_outside_ball(rt, 4.0 * lam_q));
            stress_ratio =
                std::max(stress_ratio, norm_sup(rt) / (lamdel_q2 * et));
        }

        // energy sandwich
        EnergyTraceRow row;
        row.t = t;
        row.e = et;
        if (!mult) {
            VectorField sum = yt;
            if (z) sum = sum + z->field_at(state.grid, t, sched.f_cut[q]);
            row.pinned = std::pow(norm_hs(sum, 0.5), 2);
            row.gap = et - row.pinned;
            row.window_lo = 0.75 * lamdel_q1 * et;
            row.window_hi = 1.25 * lamdel_q1 * et;
        } else {
            const double u = ups ? ups->upsilon(t) : 1.0;
            row.pinned = u * u * std::pow(norm_hs(yt, 0.5), 2);
            row.gap = et - row.pinned;
            row.window_lo = 0.75 * lamdel_q1 * et;
            row.window_hi = 1.25 * lamdel_q1 * et;
        }
        const double ratio = row.gap / (lamdel_q1 * et);
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
        scan.trace.push_back(row);

        // material derivative on a stride
        if (opts.dt_stride > 0 && ti % std::size_t(opts.dt_stride) == 0 &&
            norm_sup(yt) > 0.0) {
            VectorField yl_acc(state.grid);
            VectorField zl_acc(state.grid);
            for (std::size_t i = 0; i < tk.weights.size(); ++i) {
                const double lag = double(tk.lag_offset + i) * tk.dt;
                yl_acc = yl_acc + tk.weights[i] * state.y(t - lag);
                if (!mult && z)
                    zl_acc = zl_acc +
                             tk.weights[i] * z->field_at(state.grid, t - lag,
                                                         sched.f_cut[q]);
            }
            VectorField drift = frac_laplacian(mollify_space(yl_acc, ell), 1.0);
            if (!mult && z)
                drift = drift +
                        frac_laplacian(mollify_space(zl_acc, ell), 1.0);
            if (mult && ups) drift = ups->upsilon_mollified(t, tau) * drift;
            const VectorField dy =
                (1.0 / (2.0 * fd_h)) * (state.y(t + fd_h) - state.y(t - fd_h));
            sup_dty = std::max(sup_dty, norm_sup(dy + advect(drift, yt)));
        }
    }

    double cum = 1.0;
    for (int j = 1; j <= q; ++j) cum += std::exp(0.5 * sched.delta[j].log);
    const double mfac = mult ? std::pow(m_L, 4) : 1.0;

    auto add = [&](std::string id, double measured, double bound) {
        InductiveRow r;
        r.id = std::move(id);
        r.measured = measured;
        r.bound = bound;
        r.holds = measured <= bound;
        scan.report.rows.push_back(r);
    };

    add("freq_support_y", mass_y, 0.0);
    add("amp_sup", sup_y, std::sqrt(m0) * cum * mfac * std::sqrt(ebar));
    add("amp_c1", sup_c1,
        std::sqrt(m0) * mfac * lam_q * std::sqrt(del_q) * std::sqrt(ebar));
    add("material_derivative", sup_dty,
        m0 * lam_q * lam_q * del_q * ebar *
            (mult ? std::pow(m_L, 8) *
                        std::exp(std::pow(
                            std::max(1.0, sched.horizon_L.value_or(1.0)),
                            0.25))
                  : 1.0));
    add("freq_support_stress", mass_r, 0.0);
    add("stress_size", stress_ratio,
        eps32 * (mult ? std::exp(-3.0 * std::pow(
                                           sched.horizon_L.value_or(1.0), 0.25))
                      : 1.0));
    scan.report.energy_ratio_min = ratio_min;
    scan.report.energy_ratio_max = ratio_max;
    {
        InductiveRow r;
        r.id = "energy_window";
        r.measured = ratio_min;
        r.bound = ratio_max;
        r.holds = ratio_min >= 0.75 - 1e-12 && ratio_max <= 1.25 + 1e-12;
        scan.report.rows.push_back(r);
    }

    scan.report.all_hold = true;
    for (const auto& r : scan.report.rows)
        scan.report.all_hold = scan.report.all_hold && r.holds;
    return scan;
}

}  // namespace msqg
