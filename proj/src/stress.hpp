#pragma once

#include "iterate.hpp"

namespace msqg {

/// The six stress components of one step, each symmetric trace-free, with
/// total = sum (exact by construction).
struct StressBreakdown {
    SymTFField r_t, r_n, r_l, r_o, r_com1, r_com2;

    SymTFField total() const;
    /// entrywise sup norms in a fixed order (T, N, L, O, Com1, Com2)
    std::array<double, 6> sup_norms() const;
};

/// Assemble the stress decomposition at time t; time derivatives of the
/// perturbation use a centered stencil of half-width fd_dt (one-sided at the
/// span ends is the caller's responsibility via fd_dt choice).
StressBreakdown assemble_stress(const StageWorkspace& ws, double t,
                                double fd_dt);

struct ResidualReport {
    double sup_abs = 0.0;    // Leray-projected equation residual, sup norm
    double sup_rel = 0.0;    // relative to the largest term
    double pressure_gap = 0.0;  // bookkeeping vs spectrally recovered pressure
};

/// Relaxed-equation residual of the state (y, p, R) at time t. The stress
/// field is taken from the state; time derivative via centered differences
/// of half-width fd_dt.
ResidualReport equation_residual(const IterationState& state,
                                 const ParamSchedule& sched,
                                 const ZProcess* z, const UpsilonPath* ups,
                                 double t, double fd_dt);

/// Composed next state: y_{q+1} = y_l + w, stress assembled on demand.
IterationState compose_iterate(const std::shared_ptr<StageWorkspace>& ws,
                               double stress_fd_dt);

}  // namespace msqg
