#pragma once

#include <vector>

#include "spectral.hpp"

namespace msqg {

/// Space mollification at scale l: Gaussian transform phi_hat(l m) =
/// exp(-|l m|^2 / 2); mass one, constants preserved.
double space_kernel_symbol(double r);
ScalarField mollify_space(const ScalarField& f, double l);
VectorField mollify_space(const VectorField& f, double l);
SymTFField mollify_space(const SymTFField& f, double l);

/// First absolute moment of the space kernel at scale l (the constant in the
/// sup-norm mollifier estimate).
double space_kernel_first_moment(double l);

// ---------------------------------------------------------------------------
// One-sided (past-supported) time mollifier: discrete weights on lags
// s in (width, 2 width], renormalized to exact mass one on the sample grid.
// The mollified value at t reads only strictly-past samples.
// ---------------------------------------------------------------------------
struct TimeKernel {
    double width = 0.0;            // tau of the active stage
    double dt = 0.0;               // series spacing
    std::vector<double> weights;   // on lags (l0 + i)*dt
    std::size_t lag_offset = 0;    // smallest lag index (> width/dt)

    static TimeKernel make(double width, double dt);
    double first_moment() const;   // sum w_i * lag_i, in time units
    std::size_t max_lag() const { return lag_offset + weights.size() - 1; }
};

/// Mollify a uniformly sampled scalar series; the output is defined where the
/// full past window exists (InsufficientHistory otherwise).
/// values[i] corresponds to t0 + i*dt; output index range
/// [kernel.max_lag(), n).
std::vector<double> mollify_time(const std::vector<double>& values,
                                 const TimeKernel& kernel);

}  // namespace msqg
