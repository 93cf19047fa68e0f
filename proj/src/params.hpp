#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "util.hpp"

namespace msqg {

enum class NoiseMode { Additive, Multiplicative };

/// One geometric quantity in dual representation: exact log-space value plus
/// a float realization that may overflow at theoretical-regime sizes.
struct LogValue {
    double log = 0.0;      // natural log, always finite
    double value = 0.0;    // exp(log) when representable
    bool overflow = false; // set when exp(log) > 1e300

    static LogValue from_log(double lg);
    static LogValue from_value(double v);
};

// ---------------------------------------------------------------------------
// Full per-stage parameter schedule. Arrays are indexed by stage q and
// populated for q = 0..Q+3 (stress targets look three stages ahead).
// ---------------------------------------------------------------------------
struct ParamSchedule {
    long long a = 0;
    long long b = 0;
    double beta = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;
    int stages = 0;  // Q
    std::optional<double> horizon_L;

    std::vector<LogValue> lambda;   // lambda[q] = a^{b^q}
    std::vector<LogValue> delta;    // delta[q] = lambda_1^{2b-1} lambda_q^{-2b}
    std::vector<LogValue> ell;      // ell[q+1] = lambda_{q+1}^{-alpha}
    std::vector<LogValue> tau;      // tau[q+1]
    std::vector<double> t_start;    // t_start[q] in [-2, 0)
    std::vector<double> f_cut;      // f_cut[q] = lambda_q/4

    double m0 = 0.0;  // set once geometry constants are known

    int max_index() const { return stages + 3; }
    double lambda_delta(int q) const;  // float lambda_q*delta_q (log-computed)
};

struct RegimeCheck {
    std::string id;           // stable audit id
    std::string requirement;  // human-readable inequality
    bool holds = false;
    double slack = 0.0;       // log-space margin; positive iff holds
};

struct RegimeReport {
    bool theoretical = false;
    std::vector<RegimeCheck> checks;
};

/// Build the schedule. Preconditions a >= 2, b >= 2, Q >= 1 are hard errors;
/// interval violations on beta/alpha/gamma/sigma only flag the regime.
ParamSchedule build_schedule(long long a, long long b, double beta,
                             double alpha, double gamma, double sigma,
                             int stages,
                             std::optional<double> horizon_L = std::nullopt);

/// Evaluate every admissibility inequality in log-space.
RegimeReport check_admissibility(const ParamSchedule& s, NoiseMode mode);

struct DirectionSystem;  // geometry.hpp

/// Smallest M0 compatible with the measured projector norm bound C1 and the
/// built direction system: M0 = ((4 C1 / pi) sup_k ||gamma_k||_{C(ball)})^2.
double compute_m0(const DirectionSystem& geo, double c1);

}  // namespace msqg
