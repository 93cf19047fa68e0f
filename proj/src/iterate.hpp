#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "geometry.hpp"
#include "mollify.hpp"
#include "noise.hpp"
#include "params.hpp"
#include "spectral.hpp"
#include "transport.hpp"

namespace msqg {

// ---------------------------------------------------------------------------
// Prescribed energy profile e(t).
// ---------------------------------------------------------------------------
struct EnergyProfile {
    enum class Kind { Affine, Exponential, Sampled };
    Kind kind = Kind::Affine;
    double d0 = 80.0, d1 = 1.0;
    std::vector<double> ts, es;  // sampled table

    static EnergyProfile affine(double d0, double d1);
    static EnergyProfile exponential(double d0, double d1);
    static EnergyProfile sampled(std::vector<double> ts, std::vector<double> es);

    double at(double t) const;
    double deriv(double t) const;
    double sup(double lo, double hi) const;    // ebar
    double inf(double lo, double hi) const;    // u (must be > 4)
    double deriv_sup(double lo, double hi) const;
};

// ---------------------------------------------------------------------------
// Squared-cutoff partition of unity: chi_j(t) = chi(t/tau - j) with
// sum_j chi_j^2 = 1 exactly and at most two active slices.
// ---------------------------------------------------------------------------
struct CutoffFamily {
    double tau = 0.0;
    int j_min = 0, j_max = 0;

    static CutoffFamily make(double tau, double t_lo, double t_hi);

    static double bump(double u);  // raw bump, 1 on |u|<=1/4, supp (-1,1)
    double chi(int j, double t) const;
    double partition_sum(double t) const;  // sum chi_j^2
    std::vector<int> active(double t) const;
    double anchor(int j) const { return tau * j; }
};

// ---------------------------------------------------------------------------
// One stage of the iteration: lazily evaluable fields plus bookkeeping.
// Evaluators are memoized; copies share the cache.
// ---------------------------------------------------------------------------
class IterationState {
  public:
    int q = 0;
    NoiseMode mode = NoiseMode::Additive;
    PeriodicGrid grid;
    double t_start = -2.0;
    double t_stop = 1.0;

    std::function<VectorField(double)> y_fn;
    std::function<SymTFField(double)> r_fn;
    std::function<ScalarField(double)> p_fn;

    VectorField y(double t) const;
    SymTFField stress(double t) const;
    ScalarField pressure(double t) const;

    IterationState();

  private:
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

/// Base states: additive (y0 = 0, stress from the truncated z), or
/// multiplicative (0, 0).
IterationState base_step(NoiseMode mode, const ParamSchedule& sched,
                         const PeriodicGrid& grid, const ZProcess* z,
                         double t_stop);

// ---------------------------------------------------------------------------
// Step q -> q+1.
// ---------------------------------------------------------------------------
struct StageInputs {
    const ParamSchedule* sched = nullptr;
    const DirectionSystem* geo = nullptr;
    const EnergyProfile* energy = nullptr;
    NoiseMode mode = NoiseMode::Additive;
    const ZProcess* z = nullptr;              // additive
    const BrownianPath* brownian = nullptr;   // multiplicative
    PeriodicGrid grid;
    int q = 0;           // stage being extended
    double t_stop = 1.0;
    unsigned workers = 1;
    int samples_per_slice = 8;
    int flow_samples_per_slice = 4;
    int kernel_taps = 4;
};

struct SliceData {
    int j = 0;
    double anchor = 0.0;
    SymTFField r_anchor;             // mollified stress transported source
    SparseScalar r11, r12;
    double r_anchor_norm = 0.0;
    double gamma_l_anchor = 0.0;
    double rho = 0.0;
    DriftSampler drift;
    std::unique_ptr<FlowMap> flow;
};

class StageWorkspace {
  public:
    StageWorkspace(const StageInputs& in, const IterationState& prev);

    const StageInputs& inputs() const { return in_; }
    const CutoffFamily& cutoffs() const { return cut_; }
    double tau() const { return tau_; }
    double ell() const { return ell_; }
    double lambda_next() const { return lambda_next_; }
    double grid_dt() const { return grid_dt_; }
    double t_lo() const { return t_lo_; }
    double t_hi() const { return in_.t_stop; }

    // mollified previous-stage fields (memoized)
    VectorField y_l(double t) const;
    SymTFField r_l(double t) const;
    ScalarField p_l(double t) const;

    // noise handles
    VectorField z_trunc(double t, int stage) const;  // z_stage on the grid
    VectorField z_l(double t) const;
    double upsilon(double t) const;
    double upsilon_inv(double t) const;
    double upsilon_l(double t) const;

    // scalar machinery
    double energy_gap(double t) const;    // gamma_q / bar-gamma_q, clipped
    double energy_gap_raw(double t) const;
    double gamma_l(double t) const;
    int clip_events() const { return clip_events_; }

    SliceData& slice(int j) const;

    /// amplitude fields for slice j at time t: one real physical array per
    /// direction pair; also returns the phase arrays per pair.
    struct WaveData {
        std::vector<std::vector<double>> amplitude;  // [pair][point]
        std::vector<cplx> psi[3];                    // per pair
        std::array<double, 2> k[3];                  // representative dirs
    };
    WaveData waves(int j, double t) const;

    VectorField w(double t) const;
    VectorField y_next(double t) const;
    ScalarField p_next(double t) const;

    /// sum_j 4 chi_j^2 rho_j (2pi)^2 (with the upsilon factor in the
    /// multiplicative case) - the leading term of the energy quadrature.
    double quadrature_sum(double t) const;

    /// material-derivative drift at time t (mollified), as a grid field
    VectorField drift_field(double t) const;

    const IterationState& prev() const { return prev_; }

  private:
    StageInputs in_;
    IterationState prev_;
    CutoffFamily cut_;
    double tau_ = 0.0, ell_ = 0.0, lambda_next_ = 0.0;
    double grid_dt_ = 0.0, t_lo_ = 0.0;
    TimeKernel tkernel_;
    UpsilonPath ups_;

    mutable std::map<int, std::unique_ptr<SliceData>> slices_;
    mutable LruCache<VectorField> yl_cache_, w_cache_, zl_cache_;
    mutable LruCache<SymTFField> rl_cache_;
    mutable std::map<std::pair<double, double>, std::vector<cplx>> modulation_;
    std::vector<double> px_, py_;  // grid point coordinates
    mutable std::mutex mu_;

    mutable int clip_events_ = 0;

    SliceData& build_slice(int j) const;
    const std::vector<cplx>& modulation(double kx, double ky) const;
};

/// y_{q+1} as a self-contained state (stress assembled on demand through the
/// stress module; see stress.hpp).
IterationState compose_iterate(const std::shared_ptr<StageWorkspace>& ws);

// ---------------------------------------------------------------------------
// Inductive verification.
// ---------------------------------------------------------------------------
struct InductiveRow {
    std::string id;
    double measured = 0.0;
    double bound = 0.0;
    bool holds = false;
};

struct InductiveReport {
    int q = 0;
    std::vector<InductiveRow> rows;
    double energy_ratio_min = 0.0, energy_ratio_max = 0.0;
    bool all_hold = false;
};

struct EnergyTraceRow {
    double t = 0.0;
    double e = 0.0;
    double pinned = 0.0;   // ||y+z||^2 (or Upsilon^2 ||y||^2)
    double gap = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
};

struct InductiveScan {
    InductiveReport report;
    std::vector<EnergyTraceRow> trace;
};

struct InductiveOptions {
    int dt_stride = 8;     // material-derivative probe stride
    int sup_stride = 4;    // physical-space sup-norm probe stride
    int kernel_taps = 4;
    unsigned workers = 1;
};

/// Evaluate every inductive hypothesis of the state's stage on the given
/// probe times (one sweep; fields evaluated once per time). m_L enters only
/// in the multiplicative mode.
InductiveScan check_inductive(const IterationState& state,
                              const EnergyProfile& e,
                              const ParamSchedule& sched,
                              const DirectionSystem& geo, double m0,
                              const ZProcess* z, const UpsilonPath* ups,
                              double m_L, const std::vector<double>& times,
                              const InductiveOptions& opts = {});

}  // namespace msqg
