#include "catex/welfare_policy.hpp"

#include <cmath>

namespace catex {

ExternalityEnv::ExternalityEnv(double inspection_cost_, double spillover_)
    : inspection_cost(inspection_cost_), spillover(spillover_) {
    if (!(inspection_cost >= 0.0) || !std::isfinite(inspection_cost)) {
        throw std::invalid_argument("ExternalityEnv: inspection_cost must be finite and >= 0");
    }
    if (!(spillover >= 0.0) || !std::isfinite(spillover)) {
        throw std::invalid_argument("ExternalityEnv: spillover must be finite and >= 0");
    }
}

std::string_view stance_name(PolicyStance s) {
    switch (s) {
        case PolicyStance::tax: return "tax";
        case PolicyStance::subsidy: return "subsidy";
        case PolicyStance::neutral: return "neutral";
    }
    return "unknown";
}

double social_net_value(const ModelParams& p, const ExternalityEnv& env) {
    OptionValueBreakdown ov = decompose_option_value(p);
    return p.delta * (ov.v_ic + ov.v_isq) - p.cost -
           p.delta * (env.inspection_cost - env.spillover);
}

PolicyBundle optimal_policy(const ModelParams& p, const ExternalityEnv& env) {
    PolicyBundle bundle;
    bundle.exploration_tax = p.delta * env.inspection_cost;
    if (env.spillover > 0.0) {
        double ps = switch_probability(p);
        if (ps <= 0.0) {
            throw std::domain_error(
                "optimal_policy: matching subsidy undefined (spillover > 0 with zero switch "
                "probability)");
        }
        bundle.matching_subsidy = env.spillover / ps;
    } else {
        bundle.matching_subsidy = 0.0;
    }
    if (env.inspection_cost > env.spillover) {
        bundle.net_stance = PolicyStance::tax;
    } else if (env.inspection_cost < env.spillover) {
        bundle.net_stance = PolicyStance::subsidy;
    } else {
        bundle.net_stance = PolicyStance::neutral;
    }
    return bundle;
}

double taxed_private_net_value(const ModelParams& p, const ExternalityEnv& env,
                               const PolicyBundle& bundle) {
    (void)env;
    OptionValueBreakdown ov = decompose_option_value(p);
    return p.delta * (ov.total + bundle.matching_subsidy * ov.switch_prob) - p.cost -
           bundle.exploration_tax;
}

double disclosure_tradeoff(const BinarySignalEnv& env_signal, const ExternalityEnv& env_ext,
                           double catalytic_explorer_mass) {
    if (catalytic_explorer_mass < 0.0 || catalytic_explorer_mass > 1.0) {
        throw std::invalid_argument("disclosure_tradeoff: mass must lie in [0,1]");
    }
    const ModelParams& p = env_signal.base;
    double direct = catalytic_explorer_mass * (p.cost + p.delta * env_ext.inspection_cost);
    double effort = counterfactual_separating_effort(env_signal);
    double signal_cost = env_signal.cost_shape.value(effort, env_signal.theta_high);
    return direct - env_signal.prior_high * signal_cost;
}

}  // namespace catex
