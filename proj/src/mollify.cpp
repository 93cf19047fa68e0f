#include "mollify.hpp"

#include <cmath>

namespace msqg {

double space_kernel_symbol(double r) { return std::exp(-0.5 * r * r); }

namespace {

ScalarField apply_space(const ScalarField& f, double l) {
    ScalarField out(f.grid);
    const int n = f.grid.n;
    for (int iy = 0; iy < n; ++iy) {
        const int my = f.grid.mode(iy);
        for (int ix = 0; ix < n; ++ix) {
            const int mx = f.grid.mode(ix);
            const std::size_t idx = std::size_t(iy) * n + ix;
            const double r = l * std::hypot(double(mx), double(my));
            out.hat[idx] = f.hat[idx] * space_kernel_symbol(r);
        }
    }
    return out;
}

}  // namespace

ScalarField mollify_space(const ScalarField& f, double l) {
    if (!(l > 0.0)) throw ConfigError("mollification scale must be positive");
    return apply_space(f, l);
}

VectorField mollify_space(const VectorField& f, double l) {
    VectorField out;
    out.c1 = mollify_space(f.c1, l);
    out.c2 = mollify_space(f.c2, l);
    return out;
}

SymTFField mollify_space(const SymTFField& f, double l) {
    SymTFField out;
    out.a11 = mollify_space(f.a11, l);
    out.a12 = mollify_space(f.a12, l);
    return out;
}

double space_kernel_first_moment(double l) {
    // E|Y| for an isotropic 2d Gaussian of scale l (Rayleigh mean)
    return l * std::sqrt(0.5 * M_PI);
}

TimeKernel TimeKernel::make(double width, double dt) {
    if (!(width > 0.0) || !(dt > 0.0))
        throw ConfigError("time kernel needs positive width and dt");
    TimeKernel k;
    k.width = width;
    k.dt = dt;
    // lags strictly inside (width, 2 width]
    const auto lo = std::size_t(std::floor(width / dt)) + 1;
    const auto hi = std::size_t(std::floor(2.0 * width / dt));
    if (hi < lo)
        throw ConfigError("time grid too coarse for the mollifier window");
    k.lag_offset = lo;
    k.weights.resize(hi - lo + 1);
    double mass = 0.0;
    for (std::size_t i = 0; i < k.weights.size(); ++i) {
        const double s = (lo + i) * dt;
        // smooth bump centered on the window, zero at both ends
        const double u = (s - 1.5 * width) / (0.5 * width);
        k.weights[i] = std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
        mass += k.weights[i];
    }
    if (mass <= 0.0) {
        // single-sample window
        k.weights.assign(1, 1.0);
        k.weights.resize(hi - lo + 1, 0.0);
        k.weights[0] = 1.0;
        mass = 1.0;
    }
    for (auto& w : k.weights) w /= mass;
    return k;
}

double TimeKernel::first_moment() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        acc += weights[i] * (lag_offset + i) * dt;
    return acc;
}

std::vector<double> mollify_time(const std::vector<double>& values,
                                 const TimeKernel& kernel) {
    const std::size_t lag = kernel.max_lag();
    if (values.size() <= lag)
        throw InsufficientHistory("series shorter than the mollifier window");
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t i = lag; i < values.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < kernel.weights.size(); ++j)
            acc += kernel.weights[j] * values[i - kernel.lag_offset - j];
        out[i] = acc;
    }
    return out;
}

}  // namespace msqg
