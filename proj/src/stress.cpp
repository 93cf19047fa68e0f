#include "stress.hpp"

#include <cmath>

namespace msqg {

SymTFField StressBreakdown::total() const {
    return r_t + r_n + r_l + r_o + r_com1 + r_com2;
}

std::array<double, 6> StressBreakdown::sup_norms() const {
    return {norm_sup(r_t), norm_sup(r_n), norm_sup(r_l),
            norm_sup(r_o), norm_sup(r_com1), norm_sup(r_com2)};
}

namespace {

/// u^perp s with u = Lambda a, s = perp-div b (the repeated building block
/// Lambda a^perp (perp_div b)).
VectorField perp_block(const VectorField& a, const VectorField& b) {
    return perp_curl_form(a, b);
}

}  // namespace

StressBreakdown assemble_stress(const StageWorkspace& ws, double t,
                                double fd_dt) {
    const auto& in = ws.inputs();
    const PeriodicGrid& g = in.grid;
    const int q = in.q;
    StressBreakdown out;

    const VectorField wt = ws.w(t);
    const VectorField w_plus = ws.w(t + fd_dt);
    const VectorField w_minus = ws.w(t - fd_dt);
    const VectorField dt_w = (1.0 / (2.0 * fd_dt)) * (w_plus - w_minus);
    const VectorField yl = ws.y_l(t);
    const VectorField lam_yl = frac_laplacian(yl, 1.0);

    if (in.mode == NoiseMode::Additive) {
        const VectorField zl = ws.z_l(t);
        const VectorField zq = ws.z_trunc(t, q);
        const VectorField zq1 = ws.z_trunc(t, q + 1);
        const VectorField lam_zl = frac_laplacian(zl, 1.0);

        // transport: d_t w + (Lam y_l + Lam z_l) . grad w
        out.r_t = inverse_divergence(dt_w + advect(lam_yl + lam_zl, wt));

        // Nash: (grad Lam (y_l + z_q))^T w + (Lam w . grad) y_l
        //       - (grad y_l)^T Lam w
        const VectorField lam_ylzq = frac_laplacian(yl + zq, 1.0);
        const VectorField lam_w = frac_laplacian(wt, 1.0);
        out.r_n = inverse_divergence(grad_transpose_dot(lam_ylzq, wt) +
                                     advect(lam_w, yl) -
                                     grad_transpose_dot(yl, lam_w));

        // linear: Lam^g w - Lam^g z_l + Lam^{3/2-2s} z_l + Lam^g z_{q+1}
        //         - Lam^{3/2-2s} z_{q+1} + Lam w^perp (perp_div z_l)
        const double gm = in.sched->gamma;
        const double sg = 1.5 - 2.0 * in.sched->sigma;
        out.r_l = inverse_divergence(
            frac_laplacian(wt, gm) - frac_laplacian(zl, gm) +
            frac_laplacian(zl, sg) + frac_laplacian(zq1, gm) -
            frac_laplacian(zq1, sg) + perp_block(wt, zl));

        // oscillation, closed form
        out.r_o = ws.r_l(t) + inverse_divergence(perp_block(wt, wt));

        // first commutator: B[Lam(y_l+z_l)^perp pd(y_l+z_l)
        //                     - mollified(Lam(y_q+z_q)^perp pd(y_q+z_q))]
        const VectorField ylzl = yl + zl;
        VectorField inner = perp_block(ylzl, ylzl);
        {
            // mollify the previous-stage nonlinearity with the same kernel
            const TimeKernel tk = TimeKernel::make(ws.tau(),
                                                   ws.tau() / in.kernel_taps);
            VectorField acc(g);
            for (std::size_t i = 0; i < tk.weights.size(); ++i) {
                const double lag = double(tk.lag_offset + i) * tk.dt;
                const VectorField yq = ws.prev().y(t - lag);
                const VectorField zq_lag = ws.z_trunc(t - lag, q);
                const VectorField sum = yq + zq_lag;
                acc = acc + tk.weights[i] * perp_block(sum, sum);
            }
            inner = inner - mollify_space(acc, ws.ell());
        }
        out.r_com1 = inverse_divergence(inner);

        // second commutator, the printed term list
        const VectorField y1 = ws.y_next(t);
        const VectorField dz = zq1 - zq;       // z_{q+1} - z_q
        const VectorField zd = zq - zl;        // z_q - z_l
        const VectorField lam_dz = frac_laplacian(dz, 1.0);
        const VectorField lam_zd = frac_laplacian(zd, 1.0);
        VectorField c2 = advect(frac_laplacian(y1, 1.0), dz);
        c2 = c2 + advect(lam_dz, y1);
        c2 = c2 - grad_transpose_dot(yl, lam_dz);
        c2 = c2 - grad_transpose_dot(dz, frac_laplacian(yl, 1.0));
        c2 = c2 + grad_transpose_dot(lam_dz, wt);
        c2 = c2 + perp_block(wt, zd);            // -Lam w^perp pd(z_l - z_q)
        c2 = c2 - grad_transpose_dot(dz, frac_laplacian(wt, 1.0));
        c2 = c2 + perp_block(yl, zd);
        c2 = c2 + advect(lam_zd, wt);
        c2 = c2 + perp_block(zd, yl);
        c2 = c2 + perp_block(dz, zq1);
        c2 = c2 + perp_block(zd, zq1);
        c2 = c2 + perp_block(zl, dz);
        c2 = c2 + perp_block(zl, zd);
        out.r_com2 = inverse_divergence(c2);

        // every component provably lives inside B(0, 4 lambda_{q+1}); the
        // truncation only removes FFT round-off dust
        const double ball = 4.0 * in.sched->lambda[q + 1].value;
        out.r_t = ball_truncate(out.r_t, ball);
        out.r_n = ball_truncate(out.r_n, ball);
        out.r_l = ball_truncate(out.r_l, ball);
        out.r_o = ball_truncate(out.r_o, ball);
        out.r_com1 = ball_truncate(out.r_com1, ball);
        out.r_com2 = ball_truncate(out.r_com2, ball);
    } else {
        const double ul = ws.upsilon_l(t);
        const double u = ws.upsilon(t);

        out.r_t = inverse_divergence(dt_w + ul * advect(lam_yl, wt));

        const VectorField lam_w = frac_laplacian(wt, 1.0);
        out.r_n = inverse_divergence(
            ul * (grad_transpose_dot(lam_yl, wt) + advect(lam_w, yl) -
                  grad_transpose_dot(yl, lam_w)));

        out.r_l = inverse_divergence(frac_laplacian(wt, in.sched->gamma) +
                                     0.5 * wt);

        out.r_o = ws.r_l(t) + ul * inverse_divergence(perp_block(wt, wt));

        // first commutator
        VectorField inner = ul * perp_block(yl, yl);
        {
            const TimeKernel tk = TimeKernel::make(ws.tau(),
                                                   ws.tau() / in.kernel_taps);
            VectorField acc(g);
            for (std::size_t i = 0; i < tk.weights.size(); ++i) {
                const double lag = double(tk.lag_offset + i) * tk.dt;
                const VectorField yq = ws.prev().y(t - lag);
                acc = acc + (tk.weights[i] * ws.upsilon(t - lag)) *
                                perp_block(yq, yq);
            }
            inner = inner - mollify_space(acc, ws.ell());
        }
        out.r_com1 = inverse_divergence(inner);

        // stochastic commutator (Upsilon - Upsilon_l) x nonlinearity(y_{q+1})
        const VectorField y1 = ws.y_next(t);
        const VectorField lam_y1 = frac_laplacian(y1, 1.0);
        out.r_com2 = inverse_divergence(
            (u - ul) * (advect(lam_y1, y1) - grad_transpose_dot(y1, lam_y1)));

        const double ball = 4.0 * in.sched->lambda[q + 1].value;
        out.r_t = ball_truncate(out.r_t, ball);
        out.r_n = ball_truncate(out.r_n, ball);
        out.r_l = ball_truncate(out.r_l, ball);
        out.r_o = ball_truncate(out.r_o, ball);
        out.r_com1 = ball_truncate(out.r_com1, ball);
        out.r_com2 = ball_truncate(out.r_com2, ball);
    }
    return out;
}

ResidualReport equation_residual(const IterationState& state,
                                 const ParamSchedule& sched,
                                 const ZProcess* z, const UpsilonPath* ups,
                                 double t, double fd_dt) {
    ResidualReport rep;
    const PeriodicGrid& g = state.grid;
    const VectorField yt = state.y(t);
    const VectorField dty =
        (1.0 / (2.0 * fd_dt)) * (state.y(t + fd_dt) - state.y(t - fd_dt));
    const SymTFField rt = state.stress(t);
    VectorField lhs = dty;

    if (state.mode == NoiseMode::Additive) {
        VectorField zq(g);
        if (z) zq = z->field_at(g, t, sched.f_cut[state.q]);
        const VectorField sum = yt + zq;
        const VectorField lam_sum = frac_laplacian(sum, 1.0);
        lhs = lhs + advect(lam_sum, sum) - grad_transpose_dot(sum, lam_sum);
        lhs = lhs + frac_laplacian(yt, sched.gamma);
        lhs = lhs + frac_laplacian(zq, sched.gamma) -
              frac_laplacian(zq, 1.5 - 2.0 * sched.sigma);
    } else {
        const double u = ups ? ups->upsilon(t) : 1.0;
        const VectorField lam_y = frac_laplacian(yt, 1.0);
        lhs = lhs + 0.5 * yt +
              u * (advect(lam_y, yt) - grad_transpose_dot(yt, lam_y));
        lhs = lhs + frac_laplacian(yt, sched.gamma);
    }

    const VectorField divr = divergence(rt);
    const VectorField defect = lhs - divr;
    const VectorField projected = leray(defect);
    rep.sup_abs = norm_sup(projected);

    double scale = std::max({norm_sup(lhs), norm_sup(divr), 1e-30});
    rep.sup_rel = rep.sup_abs / scale;

    // pressure check: spectral recovery vs bookkeeping
    const ScalarField p_book = state.pressure(t);
    // grad p = -(I - Leray) defect  => p = -inv_lap(div defect)
    const ScalarField divd = divergence(defect);
    ScalarField p_rec(g);
    const int n = g.n;
    for (int iy = 0; iy < n; ++iy) {
        const int my = g.mode(iy);
        for (int ix = 0; ix < n; ++ix) {
            const int mx = g.mode(ix);
            const double m2 = double(mx) * mx + double(my) * my;
            if (m2 == 0.0) continue;
            p_rec.hat[std::size_t(iy) * n + ix] =
                divd.hat[std::size_t(iy) * n + ix] / m2;
        }
    }
    rep.pressure_gap = norm_sup(mean_zero(p_book) - p_rec);
    return rep;
}

IterationState compose_iterate(const std::shared_ptr<StageWorkspace>& ws,
                               double stress_fd_dt) {
    IterationState s;
    s.q = ws->inputs().q + 1;
    s.mode = ws->inputs().mode;
    s.grid = ws->inputs().grid;
    s.t_start = ws->t_lo();
    s.t_stop = ws->t_hi();
    s.y_fn = [ws](double t) { return ws->y_next(t); };
    s.p_fn = [ws](double t) { return ws->p_next(t); };
    s.r_fn = [ws, stress_fd_dt](double t) {
        return assemble_stress(*ws, t, stress_fd_dt).total();
    };
    return s;
}

}  // namespace msqg
