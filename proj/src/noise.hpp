#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "params.hpp"
#include "spectral.hpp"

namespace msqg {

// ---------------------------------------------------------------------------
// Additive noise: a divergence-free GG*-Wiener process sampled mode-wise with
// amplitudes g_m = amplitude * |m|^{-(7/4+4 sigma)-1-eta}, eta = 0.01, so the
// trace condition holds with margin. Each mode carries one complex
// coefficient along m_perp/|m|.
// ---------------------------------------------------------------------------
struct NoiseSpec {
    double sigma = 0.1;
    double amplitude = 1.0;
    double extra_decay = 1.01;   // 1 + eta
    double mode_radius = 0.0;    // simulate |m| <= radius
    double dt = 1.0 / 1024.0;
    std::uint64_t seed = 0;

    double decay_exponent() const {
        return (1.75 + 4.0 * sigma) + extra_decay;
    }
    /// margin of the numerically-checked trace condition (positive = holds)
    double trace_margin() const { return 2.0 * extra_decay - 2.0; }
};

struct OUMode {
    int mx = 0, my = 0;
    double g = 0.0;      // noise amplitude
    double theta = 0.0;  // drift rate |m|^{3/2 - 2 sigma}
};

// ---------------------------------------------------------------------------
// Solution of the auxiliary linear equation: per mode an exact-in-law OU
// update; z == 0 on [-4, 0]. History is stored at uniform samples t_i = i*dt.
// ---------------------------------------------------------------------------
struct ZProcess {
    NoiseSpec spec;
    double t_end = 0.0;
    std::vector<OUMode> modes;                 // representative half-lattice
    std::vector<std::vector<cplx>> history;    // [step][mode]
    std::vector<double> times;

    bool zero() const { return modes.empty() || spec.amplitude == 0.0; }

    /// Sobolev norm of z(t_i) over the simulated modes.
    double norm_hs_at(std::size_t step, double s) const;
    /// Sobolev norm of the difference z(t_i) - z(t_j).
    double norm_hs_diff(std::size_t i, std::size_t j, double s) const;

    /// Materialize the truncated field z_q(t) (modes |m| <= cut) on a grid;
    /// z == 0 for t <= 0; linear interpolation between samples.
    VectorField field_at(const PeriodicGrid& g, double t, double cut) const;

    /// Numerical check of the trace condition: shell partial sums of
    /// |m|^{2(7/4+4s)} g_m^2 (reported, must be finite with decaying tail).
    double trace_sum() const;
};

/// Solve the z-equation on [0, T] with the exact exponential mode update.
ZProcess solve_stokes_z(const NoiseSpec& spec, double T);

/// Closed-form per-mode variance at time t (the oracle the integrator is
/// tested against): g^2 (1 - e^{-2 theta t}) / (2 theta).
double ou_variance(double g, double theta, double t);

// ---------------------------------------------------------------------------
// Scalar Brownian path for the multiplicative case, with Upsilon = e^B.
// B extended by B(0) = 0 to negative times.
// ---------------------------------------------------------------------------
struct BrownianPath {
    double dt = 0.0;
    std::uint64_t seed = 0;
    double amplitude = 1.0;
    std::vector<double> b;  // samples at t_i = i*dt, b[0] = 0

    double at(double t) const;  // linear interpolation; 0 for t <= 0
    double t_end() const { return dt * double(b.size() - 1); }
};

BrownianPath sample_brownian(double T, double dt, std::uint64_t seed,
                             double amplitude = 1.0);

/// Upsilon(t) = e^{B(t)} and its inverse; one value per path sample.
struct UpsilonPath {
    const BrownianPath* path = nullptr;

    double upsilon(double t) const;
    double upsilon_inv(double t) const;
    /// One-sided past-supported time mollification at the given width.
    double upsilon_mollified(double t, double width) const;
};

// ------------------------------- stopping times ------------------------------

struct StoppingResult {
    double time = 0.0;
    std::string binding;  // which threshold crossed ("horizon" if none)
};

struct SobolevConstants {
    double c_s = 1.0;
    double c_0 = 1.0;
};

/// Measure C_S and C_0 over seeded probe families and double them.
SobolevConstants measure_sobolev_constants(const PeriodicGrid& g, double sigma,
                                           int probes, std::uint64_t seed);

/// First-crossing evaluation of the additive stopping time on the z grid.
StoppingResult stopping_time_additive(const ZProcess& z,
                                      const ParamSchedule& sched,
                                      const SobolevConstants& cst,
                                      double eps_gamma, double delta,
                                      double e_inf);

/// T_L = L ^ inf{|B| >= L^{1/4}} ^ inf{||B||_{C^{1/2-2delta}} >= L^{1/2}},
/// plus m_L = sqrt(3) L^{1/4} e^{L^{1/4}/2}.
struct MultStopping {
    double t_L = 0.0;
    double m_L = 0.0;
    std::string binding;
};
MultStopping stopping_time_mult(const BrownianPath& B, double L, double delta);

}  // namespace msqg
