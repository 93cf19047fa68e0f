#include "params.hpp"

#include <cmath>

#include "geometry.hpp"

namespace msqg {

LogValue LogValue::from_log(double lg) {
    LogValue v;
    v.log = lg;
    if (lg > std::log(1e300)) {
        v.overflow = true;
        v.value = HUGE_VAL;
    } else {
        v.value = std::exp(lg);
    }
    return v;
}

LogValue LogValue::from_value(double x) {
    LogValue v;
    v.value = x;
    v.log = std::log(x);
    return v;
}

double ParamSchedule::lambda_delta(int q) const {
    return std::exp(lambda[q].log + delta[q].log);
}

ParamSchedule build_schedule(long long a, long long b, double beta,
                             double alpha, double gamma, double sigma,
                             int stages, std::optional<double> horizon_L) {
    if (a < 2 || b < 2)
        throw NonPositiveBase("schedule bases must satisfy a >= 2, b >= 2");
    if (stages < 1) throw ZeroStages("stage count must be >= 1");

    ParamSchedule s;
    s.a = a;
    s.b = b;
    s.beta = beta;
    s.alpha = alpha;
    s.gamma = gamma;
    s.sigma = sigma;
    s.stages = stages;
    s.horizon_L = horizon_L;

    const int top = s.max_index();
    const double log_a = std::log(double(a));

    s.lambda.resize(top + 1);
    s.delta.resize(top + 1);
    s.ell.resize(top + 1);
    s.tau.resize(top + 1);
    s.t_start.resize(top + 1);
    s.f_cut.resize(top + 1);

    double bpow = 1.0;  // b^q
    for (int q = 0; q <= top; ++q) {
        s.lambda[q] = LogValue::from_log(bpow * log_a);
        bpow *= double(b);
    }
    const double log_lambda1 = s.lambda[1].log;
    for (int q = 0; q <= top; ++q) {
        s.delta[q] = LogValue::from_log((2.0 * beta - 1.0) * log_lambda1 -
                                        2.0 * beta * s.lambda[q].log);
        s.ell[q] = LogValue::from_log(-alpha * s.lambda[q].log);
        s.f_cut[q] = s.lambda[q].overflow ? HUGE_VAL : s.lambda[q].value / 4.0;
    }
    // tau[q+1]^{-1} = ell^{-1/2} lam_{q+2}^{1/2} del_{q+2}^{1/2} lam_{q+1}^{1/2}
    //                 del_{q+1}^{-1/4}
    for (int q = 0; q + 2 <= top; ++q) {
        const double log_inv = 0.5 * alpha * s.lambda[q + 1].log +
                               0.5 * s.lambda[q + 2].log +
                               0.5 * s.delta[q + 2].log +
                               0.5 * s.lambda[q + 1].log -
                               0.25 * s.delta[q + 1].log;
        s.tau[q + 1] = LogValue::from_log(-log_inv);
    }
    double acc = -2.0;
    s.t_start[0] = acc;
    for (int q = 1; q <= top; ++q) {
        acc += std::exp(0.5 * s.delta[q].log);
        s.t_start[q] = acc;
    }
    return s;
}

namespace {

RegimeCheck make_check(std::string id, std::string req, double slack) {
    RegimeCheck c;
    c.id = std::move(id);
    c.requirement = std::move(req);
    c.slack = slack;
    c.holds = slack >= 0.0;
    return c;
}

}  // namespace

RegimeReport check_admissibility(const ParamSchedule& s, NoiseMode mode) {
    RegimeReport r;
    auto& cs = r.checks;
    const double log_a = std::log(double(s.a));

    cs.push_back(make_check("beta_interval", "1/2 < beta < 3/4",
                            std::min(s.beta - 0.5, 0.75 - s.beta)));
    cs.push_back(make_check("alpha_interval", "1 < alpha < 3/2",
                            std::min(s.alpha - 1.0, 1.5 - s.alpha)));
    cs.push_back(make_check("dissipation_interval", "0 < gamma < 3/2",
                            std::min(s.gamma, 1.5 - s.gamma)));
    if (mode == NoiseMode::Additive)
        cs.push_back(make_check(
            "sigma_interval", "0 < sigma <= (3/2 - gamma)/2",
            std::min(s.sigma, 0.5 * (1.5 - s.gamma) - s.sigma)));
    cs.push_back(make_check("base_lattice", "a divisible by 5",
                            s.a % 5 == 0 ? 0.0 : -1.0));
    cs.push_back(
        make_check("base_size", "a >= e^16", log_a - 16.0));
    if (mode == NoiseMode::Additive) {
        cs.push_back(make_check("exponent_base_additive",
                                "b > 6/(alpha - 1/2)",
                                double(s.b) - 6.0 / (s.alpha - 0.5)));
    } else {
        const double L = s.horizon_L.value_or(1.0);
        const double need =
            std::max({6.0 * L / (s.alpha - 0.5), 4.0 * L / (3.0 - 2.0 * s.alpha),
                      L / (1.5 - s.gamma)});
        cs.push_back(make_check("exponent_base_multiplicative",
                                "b > max{6L/(alpha-1/2), 4L/(3-2 alpha), "
                                "L/(3/2-gamma)}",
                                double(s.b) - need));
    }
    // a^{b^{q+1}(2 beta - 1)(b - 1)} >= 4/3, worst case q = 0
    double worst = HUGE_VAL;
    for (int q = 0; q <= s.stages; ++q) {
        const double lhs_log = std::pow(double(s.b), q + 1) *
                               (2.0 * s.beta - 1.0) * (double(s.b) - 1.0) *
                               log_a;
        worst = std::min(worst, lhs_log - std::log(4.0 / 3.0));
    }
    cs.push_back(make_check("amplitude_ratio",
                            "a^{b^{q+1}(2beta-1)(b-1)} >= 4/3", worst));

    r.theoretical = true;
    for (const auto& c : cs) r.theoretical = r.theoretical && c.holds;
    return r;
}

double compute_m0(const DirectionSystem& geo, double c1) {
    if (geo.gamma1.empty())
        throw GeometryUnavailable("direction system not built");
    const double sup = geo.sup_gamma_norm();
    const double root = 4.0 * c1 / M_PI * sup;
    return root * root;
}

}  // namespace msqg
