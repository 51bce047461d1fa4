#pragma once

#include <string_view>

#include "catex/core_values.hpp"
#include "catex/signaling.hpp"

namespace catex {

/// Uncompensated costs and benefits exploration imposes on third parties:
/// inspection_cost is borne by the explored challenger, spillover is the
/// public information value per exploration.
struct ExternalityEnv {
    double inspection_cost;
    double spillover;
    ExternalityEnv(double inspection_cost, double spillover);
};

enum class PolicyStance { tax, subsidy, neutral };

std::string_view stance_name(PolicyStance s);

/// Two-part Pigouvian instrument: tax delta*E on the act of exploration plus
/// subsidy S/P_s paid on switching.
struct PolicyBundle {
    double exploration_tax;
    double matching_subsidy;
    PolicyStance net_stance;
};

/// delta (V^IC + V^ISQ) - c - delta (E - S).
double social_net_value(const ModelParams& p, const ExternalityEnv& env);

/// The bundle that makes the private exploration condition coincide with the
/// social one. Requires switch_prob > 0 when the spillover is positive
/// (std::domain_error otherwise).
PolicyBundle optimal_policy(const ModelParams& p, const ExternalityEnv& env);

/// Private exploration net payoff under the bundle:
/// delta (OV + subsidy * P_s) - c - tax. Coincides with social_net_value.
double taxed_private_net_value(const ModelParams& p, const ExternalityEnv& env,
                               const PolicyBundle& bundle);

/// Welfare effect of revealing the status-quo match publicly (sigma_eps -> 0):
/// catalytic explorers of mass `catalytic_explorer_mass` stop burning c and
/// delta*E, while restored separation makes high types signal again.
double disclosure_tradeoff(const BinarySignalEnv& env_signal, const ExternalityEnv& env_ext,
                           double catalytic_explorer_mass);

}  // namespace catex
