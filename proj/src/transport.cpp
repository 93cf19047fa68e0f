#include "transport.hpp"

#include <cmath>

#include "util.hpp"

namespace msqg {

SparseScalar SparseScalar::from(const ScalarField& f) {
    SparseScalar out;
    const int n = f.grid.n;
    for (int iy = 0; iy < n; ++iy) {
        const int my = f.grid.mode(iy);
        for (int ix = 0; ix < n; ++ix) {
            const cplx c = f.hat[std::size_t(iy) * n + ix];
            if (c == cplx{}) continue;
            out.modes.push_back({f.grid.mode(ix), my, c});
        }
    }
    return out;
}

void SparseScalar::eval(const std::vector<double>& x,
                        const std::vector<double>& y,
                        std::vector<double>& out) const {
    out.assign(x.size(), 0.0);
    for (const auto& m : modes) {
        const double re = m.c.real(), im = m.c.imag();
        for (std::size_t p = 0; p < x.size(); ++p) {
            const double phase = m.mx * x[p] + m.my * y[p];
            out[p] += re * std::cos(phase) - im * std::sin(phase);
        }
    }
}

double SparseScalar::sup_bound() const {
    double acc = 0.0;
    for (const auto& m : modes) acc += std::abs(m.c);
    return acc;
}

SparseVector SparseVector::from(const VectorField& f) {
    SparseVector out;
    out.c1 = SparseScalar::from(f.c1);
    out.c2 = SparseScalar::from(f.c2);
    return out;
}

void SparseVector::eval(const std::vector<double>& x,
                        const std::vector<double>& y, std::vector<double>& o1,
                        std::vector<double>& o2) const {
    c1.eval(x, y, o1);
    c2.eval(x, y, o2);
}

void DriftSampler::eval(double t, const std::vector<double>& x,
                        const std::vector<double>& y, std::vector<double>& o1,
                        std::vector<double>& o2) const {
    o1.assign(x.size(), 0.0);
    o2.assign(x.size(), 0.0);
    if (samples.empty()) return;
    const double pos = (t - t0) / dt;
    const auto i0 = std::size_t(std::clamp(pos, 0.0, double(samples.size() - 1)));
    const auto i1 = std::min(i0 + 1, samples.size() - 1);
    const double w = std::clamp(pos - double(i0), 0.0, 1.0);
    std::vector<double> a1, a2, b1, b2;
    samples[i0].eval(x, y, a1, a2);
    if (i1 != i0 && w > 0.0) {
        samples[i1].eval(x, y, b1, b2);
        for (std::size_t p = 0; p < x.size(); ++p) {
            o1[p] = (1.0 - w) * a1[p] + w * b1[p];
            o2[p] = (1.0 - w) * a2[p] + w * b2[p];
        }
    } else {
        o1 = a1;
        o2 = a2;
    }
}

double DriftSampler::sup_bound() const {
    double acc = 0.0;
    for (const auto& s : samples) acc = std::max(acc, s.sup_bound());
    return acc;
}

void grid_points(const PeriodicGrid& g, std::vector<double>& x,
                 std::vector<double>& y) {
    // FFT-native sample lattice x_j = 2 pi j / N, matching fft::synth slots
    const int n = g.n;
    const double h = g.spacing();
    x.resize(g.size());
    y.resize(g.size());
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            x[std::size_t(iy) * n + ix] = h * ix;
            y[std::size_t(iy) * n + ix] = h * iy;
        }
}

FlowMap FlowMap::make(const PeriodicGrid& g, int j, double anchor,
                      const DriftSampler& drift, double dt_flow,
                      unsigned workers) {
    if (drift.sup_bound() * dt_flow > g.spacing())
        throw CFLViolation("flow step too large for sup|drift|");
    FlowMap f;
    f.grid = g;
    f.j = j;
    f.anchor = anchor;
    f.dt_flow = dt_flow;
    f.drift = &drift;
    f.workers = workers;
    return f;
}

void FlowMap::displacement(double t, std::vector<double>& dx,
                           std::vector<double>& dy) const {
    const std::size_t npts = grid.size();
    dx.assign(npts, 0.0);
    dy.assign(npts, 0.0);
    const double span = anchor - t;
    if (span == 0.0) return;
    const bool trivial = drift->sup_bound() == 0.0;
    if (trivial) return;

    const int steps = std::max(1, int(std::ceil(std::abs(span) / dt_flow)));
    const double h = span / steps;

    std::vector<double> x0, y0;
    grid_points(grid, x0, y0);
    std::vector<double> px = x0, py = y0;
    std::vector<double> k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
    std::vector<double> tx(npts), ty(npts);

    double s = t;
    for (int step = 0; step < steps; ++step) {
        drift->eval(s, px, py, k1x, k1y);
        for (std::size_t p = 0; p < npts; ++p) {
            tx[p] = px[p] + 0.5 * h * k1x[p];
            ty[p] = py[p] + 0.5 * h * k1y[p];
        }
        drift->eval(s + 0.5 * h, tx, ty, k2x, k2y);
        for (std::size_t p = 0; p < npts; ++p) {
            tx[p] = px[p] + 0.5 * h * k2x[p];
            ty[p] = py[p] + 0.5 * h * k2y[p];
        }
        drift->eval(s + 0.5 * h, tx, ty, k3x, k3y);
        for (std::size_t p = 0; p < npts; ++p) {
            tx[p] = px[p] + h * k3x[p];
            ty[p] = py[p] + h * k3y[p];
        }
        drift->eval(s + h, tx, ty, k4x, k4y);
        for (std::size_t p = 0; p < npts; ++p) {
            px[p] += h / 6.0 * (k1x[p] + 2.0 * k2x[p] + 2.0 * k3x[p] + k4x[p]);
            py[p] += h / 6.0 * (k1y[p] + 2.0 * k2y[p] + 2.0 * k3y[p] + k4y[p]);
        }
        s += h;
    }
    for (std::size_t p = 0; p < npts; ++p) {
        dx[p] = px[p] - x0[p];
        dy[p] = py[p] - y0[p];
    }
}

std::pair<double, double> FlowMap::jacobian_range(double t) const {
    std::vector<double> dx, dy;
    displacement(t, dx, dy);
    const ScalarField fx = fft::from_real(grid, dx);
    const ScalarField fy = fft::from_real(grid, dy);
    const auto dxx = fft::real_samples(derivative(fx, 0));
    const auto dxy = fft::real_samples(derivative(fx, 1));
    const auto dyx = fft::real_samples(derivative(fy, 0));
    const auto dyy = fft::real_samples(derivative(fy, 1));
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (std::size_t p = 0; p < dx.size(); ++p) {
        const double a = 1.0 + dxx[p], b = dxy[p];
        const double c = dyx[p], d = 1.0 + dyy[p];
        const double det = a * d - b * c;
        lo = std::min(lo, det);
        hi = std::max(hi, det);
    }
    return {lo, hi};
}

void phase_from_displacement(const std::vector<double>& dx,
                             const std::vector<double>& dy, double lambda,
                             double kx, double ky, std::vector<cplx>& psi) {
    psi.resize(dx.size());
    for (std::size_t p = 0; p < dx.size(); ++p) {
        const double arg = lambda * (dx[p] * kx + dy[p] * ky);
        psi[p] = cplx(std::cos(arg), std::sin(arg));
    }
}

void transported_values(const SparseScalar& f, const PeriodicGrid& g,
                        const std::vector<double>& dx,
                        const std::vector<double>& dy,
                        std::vector<double>& out) {
    std::vector<double> x, y;
    grid_points(g, x, y);
    for (std::size_t p = 0; p < x.size(); ++p) {
        x[p] += dx[p];
        y[p] += dy[p];
    }
    f.eval(x, y, out);
}

double flow_residual(const FlowMap& flow, double t, double fd_dt) {
    std::vector<double> dxm, dym, dxp, dyp, dx0, dy0;
    flow.displacement(t - fd_dt, dxm, dym);
    flow.displacement(t + fd_dt, dxp, dyp);
    flow.displacement(t, dx0, dy0);

    const ScalarField fx = fft::from_real(flow.grid, dx0);
    const ScalarField fy = fft::from_real(flow.grid, dy0);
    const auto gxx = fft::real_samples(derivative(fx, 0));
    const auto gxy = fft::real_samples(derivative(fx, 1));
    const auto gyx = fft::real_samples(derivative(fy, 0));
    const auto gyy = fft::real_samples(derivative(fy, 1));

    std::vector<double> x, y, v1, v2;
    grid_points(flow.grid, x, y);
    flow.drift->eval(t, x, y, v1, v2);

    double worst = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p) {
        const double ddt_x = (dxp[p] - dxm[p]) / (2.0 * fd_dt);
        const double ddt_y = (dyp[p] - dym[p]) / (2.0 * fd_dt);
        const double rx = ddt_x + v1[p] * gxx[p] + v2[p] * gxy[p] + v1[p];
        const double ry = ddt_y + v1[p] * gyx[p] + v2[p] * gyy[p] + v2[p];
        worst = std::max(worst, std::hypot(rx, ry));
    }
    const double scale = std::max(flow.drift->sup_bound(), 1e-300);
    return worst / scale;
}

}  // namespace msqg
