#pragma once

#include <functional>
#include <vector>

#include "spectral.hpp"

namespace msqg {

/// Nonzero Fourier modes of a scalar field, for evaluation at scattered
/// points (cost = modes x points). Fields here are low-frequency drifts and
/// stress entries, so the mode lists stay short.
struct SparseScalar {
    struct Mode {
        int mx, my;
        cplx c;
    };
    std::vector<Mode> modes;

    static SparseScalar from(const ScalarField& f);
    /// real part of sum c e^{i m.x} at (x[i], y[i])
    void eval(const std::vector<double>& x, const std::vector<double>& y,
              std::vector<double>& out) const;
    double sup_bound() const;  // sum |c|
};

struct SparseVector {
    SparseScalar c1, c2;

    static SparseVector from(const VectorField& f);
    void eval(const std::vector<double>& x, const std::vector<double>& y,
              std::vector<double>& o1, std::vector<double>& o2) const;
    double sup_bound() const { return c1.sup_bound() + c2.sup_bound(); }
};

/// Drift samples on a uniform time grid with linear interpolation in time.
struct DriftSampler {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<SparseVector> samples;

    void eval(double t, const std::vector<double>& x,
              const std::vector<double>& y, std::vector<double>& o1,
              std::vector<double>& o2) const;
    double sup_bound() const;
};

// ---------------------------------------------------------------------------
// Backward-characteristic flow anchored at time `anchor`: displacement(t)
// returns Phi_j(t, x) - x on the grid, integrating each grid node to the
// anchor with RK4 and trigonometric evaluation of the drift.
// ---------------------------------------------------------------------------
struct FlowMap {
    PeriodicGrid grid;
    int j = 0;
    double anchor = 0.0;
    double dt_flow = 0.0;
    const DriftSampler* drift = nullptr;
    unsigned workers = 1;

    /// Throws CFLViolation if sup|drift| * dt_flow exceeds the grid spacing.
    static FlowMap make(const PeriodicGrid& g, int j, double anchor,
                        const DriftSampler& drift, double dt_flow,
                        unsigned workers);

    void displacement(double t, std::vector<double>& dx,
                      std::vector<double>& dy) const;

    /// Jacobian determinant range of Phi_j(t, .) by spectral differentiation
    /// of the displacement (diagnostic for the (0.5, 2) flag).
    std::pair<double, double> jacobian_range(double t) const;
};

/// psi_{j,k} = e^{i lambda (Phi_j - x).k} from a displacement; |psi| = 1.
void phase_from_displacement(const std::vector<double>& dx,
                             const std::vector<double>& dy, double lambda,
                             double kx, double ky, std::vector<cplx>& psi);

/// Transported field values f(Phi_j(t,x)) on the grid from sparse modes of
/// the anchor-time field.
void transported_values(const SparseScalar& f, const PeriodicGrid& g,
                        const std::vector<double>& dx,
                        const std::vector<double>& dy,
                        std::vector<double>& out);

/// Transport-equation residual ||d_t D + (V.grad)D + V|| at time t (centered
/// finite difference with half-width fd_dt), relative to sup|V|.
double flow_residual(const FlowMap& flow, double t, double fd_dt);

/// Grid point coordinate arrays (row-major, matching field storage).
void grid_points(const PeriodicGrid& g, std::vector<double>& x,
                 std::vector<double>& y);

}  // namespace msqg
