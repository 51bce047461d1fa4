#include "catex/signaling.hpp"

#include <cmath>

#include "catex/math.hpp"

namespace catex {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

ModelParams rebase(const ModelParams& base, double mu1) {
    return ModelParams(base.mu0, mu1, base.sigma_eps, base.sigma_theta, base.cost, base.delta);
}

}  // namespace

double SignalingCost::value(double effort, double theta) const {
    return std::pow(effort, exponent) / theta;
}

double SignalingCost::effort_for_cost(double cost, double theta) const {
    if (cost <= 0.0) return 0.0;
    return std::pow(cost * theta, 1.0 / exponent);
}

BinarySignalEnv::BinarySignalEnv(const ModelParams& base_like, double theta_low_,
                                 double theta_high_, double prior_high_, double reward_,
                                 SignalingCost cost_shape_, bool reward_on_exploration_)
    : base(rebase(base_like, prior_high_ * theta_high_ + (1.0 - prior_high_) * theta_low_)),
      theta_low(theta_low_), theta_high(theta_high_), prior_high(prior_high_), reward(reward_),
      cost_shape(cost_shape_), reward_on_exploration(reward_on_exploration_) {
    require(theta_low < theta_high, "theta_low must be below theta_high");
    require(theta_low > 0.0, "types must be positive for the e^k/theta cost family");
    require(prior_high > 0.0 && prior_high < 1.0, "prior_high must lie in (0,1)");
    require(reward > 0.0, "reward must be > 0");
    require(cost_shape.exponent >= 1.0, "cost exponent must be >= 1");
    // rebase() has already enforced mu1 = p thetaH + (1-p) thetaL < mu0.
}

ContinuousSignalEnv::ContinuousSignalEnv(const ModelParams& base_like, double theta_min_,
                                         double theta_max_, double reward_,
                                         SignalingCost cost_shape_)
    : base(base_like), theta_min(theta_min_), theta_max(theta_max_), reward(reward_),
      cost_shape(cost_shape_) {
    require(theta_min < theta_max, "theta_min must be below theta_max");
    require(base.mu1 >= theta_min && base.mu1 <= theta_max,
            "mu1 (mean type) must lie within the type support");
    require(reward > 0.0, "reward must be > 0");
    require(cost_shape.exponent >= 1.0, "cost exponent must be >= 1");
}

std::string_view regime_name(Regime r) {
    switch (r) {
        case Regime::separating: return "separating";
        case Regime::pooling: return "pooling";
        case Regime::partial: return "partial";
        case Regime::rejection: return "rejection";
    }
    return "unknown";
}

double choice_probability(const ModelParams& p, double theta) {
    if (p.sigma_eps == 0.0) return theta > p.mu0 ? 1.0 : 0.0;
    return norm_cdf((theta - p.mu0) / p.sigma_eps);
}

double switching_value_of_type(const ModelParams& p, double theta) {
    return one_sided_option_value(p.mu0 - theta, p.sigma_eps) -
           one_sided_option_value(p.quality_gap(), p.sigma_eps);
}

double conditional_switching_value(const BinarySignalEnv& env, double theta) {
    return switching_value_of_type(env.base, theta);
}

double collapse_threshold(const BinarySignalEnv& env) {
    return env.base.cost / env.base.delta - conditional_switching_value(env, env.theta_low);
}

double counterfactual_separating_effort(const BinarySignalEnv& env) {
    double mimic_gain = env.reward_on_exploration
                            ? env.reward
                            : env.reward * choice_probability(env.base, env.theta_low);
    return env.cost_shape.effort_for_cost(mimic_gain, env.theta_low);
}

SignalingEquilibrium solve_binary_equilibrium(const BinarySignalEnv& env) {
    double v_ic_low = conditional_switching_value(env, env.theta_low);
    if (env.base.delta * v_ic_low >= env.base.cost) {
        throw std::domain_error(
            "solve_binary_equilibrium: always-explore environment (delta * V^IC(theta_low) >= c);"
            " the switching motive alone sustains exploration of every type");
    }
    SignalingEquilibrium eq;
    eq.threshold_visq = collapse_threshold(env);
    eq.welfare_delta = welfare_of_disruption(env).total;
    double v_isq = catalytic_value(env.base);
    if (v_isq >= eq.threshold_visq) {
        eq.regime = Regime::pooling;
        eq.effort_high = 0.0;
    } else {
        eq.regime = Regime::separating;
        eq.effort_high = counterfactual_separating_effort(env);
    }
    return eq;
}

DisruptionWelfare welfare_of_disruption(const BinarySignalEnv& env) {
    double effort = counterfactual_separating_effort(env);
    double p = env.prior_high;
    double ov_low = catalytic_value(env.base) + conditional_switching_value(env, env.theta_low);
    double signaling_cost_high = env.cost_shape.value(effort, env.theta_high);

    DisruptionWelfare out;
    out.total = p * signaling_cost_high + (1.0 - p) * (env.base.delta * ov_low - env.base.cost);
    double reward_low = env.reward_on_exploration
                            ? env.reward
                            : env.reward * choice_probability(env.base, env.theta_low);
    // Separating payoffs: high type W P_s(thetaH) - psi, low type 0 (rejected).
    out.high_type_change = signaling_cost_high;
    out.low_type_change = reward_low;
    return out;
}

SignalingEquilibrium continuous_cutoff(const ContinuousSignalEnv& env) {
    const ModelParams& p = env.base;
    double target = p.cost / p.delta;

    // V^ISQ + V^IC(theta) = one_sided_option_value(mu0 - theta, sigma_eps),
    // strictly increasing in theta; solve for the indifferent type over the
    // real line, then classify against the support.
    auto excess = [&](double theta) {
        return one_sided_option_value(p.mu0 - theta, p.sigma_eps) - target;
    };
    double lo = env.theta_min;
    double hi = env.theta_max;
    double width = std::max(hi - lo, 1.0);
    while (excess(lo) > 0.0) lo -= width;
    while (excess(hi) < 0.0) hi += width;
    double cutoff = bisect(excess, lo, hi, 1e-8);

    SignalingEquilibrium eq;
    eq.cutoff_type = cutoff;
    eq.threshold_visq = p.cost / p.delta - switching_value_of_type(p, env.theta_min);
    if (cutoff <= env.theta_min) {
        eq.regime = Regime::pooling;
        eq.effort_high = 0.0;
    } else if (cutoff > env.theta_max) {
        eq.regime = Regime::rejection;
        eq.effort_high = 0.0;
    } else {
        eq.regime = Regime::partial;
        eq.effort_high = separating_effort(env, cutoff, env.theta_max);
    }
    return eq;
}

double separating_effort(const ContinuousSignalEnv& env, double theta_hat, double theta) {
    if (theta < theta_hat) return 0.0;
    double mimic_gain = env.reward * choice_probability(env.base, theta);
    return env.cost_shape.effort_for_cost(mimic_gain, theta_hat);
}

}  // namespace catex
