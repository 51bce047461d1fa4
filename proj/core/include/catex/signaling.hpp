#pragma once

#include <optional>
#include <string_view>

#include "catex/core_values.hpp"

namespace catex {

/// Signaling cost family psi(e, theta) = e^k / theta, k >= 1. Marginal cost
/// is strictly decreasing in theta (single crossing) for theta > 0.
struct SignalingCost {
    double exponent = 1.0;

    double value(double effort, double theta) const;
    /// Inverse in effort: the e solving psi(e, theta) = cost.
    double effort_for_cost(double cost, double theta) const;
};

/// Sender-receiver game with two sender types. The embedded ModelParams has
/// mu1 recomputed to the prior mean p*thetaH + (1-p)*thetaL.
struct BinarySignalEnv {
    ModelParams base;
    double theta_low;
    double theta_high;
    double prior_high;
    double reward;
    SignalingCost cost_shape;
    /// Main-text payoff variant: sender earns W when explored rather than
    /// W * P_s(theta) when chosen.
    bool reward_on_exploration = false;

    BinarySignalEnv(const ModelParams& base_like, double theta_low, double theta_high,
                    double prior_high, double reward, SignalingCost cost_shape = {},
                    bool reward_on_exploration = false);
};

/// Continuous-type variant on support [theta_min, theta_max]; the embedded
/// ModelParams carries mu1 = E[theta] under the type distribution.
struct ContinuousSignalEnv {
    ModelParams base;
    double theta_min;
    double theta_max;
    double reward;
    SignalingCost cost_shape;

    ContinuousSignalEnv(const ModelParams& base_like, double theta_min, double theta_max,
                        double reward, SignalingCost cost_shape = {});
};

enum class Regime { separating, pooling, partial, rejection };

std::string_view regime_name(Regime r);

struct SignalingEquilibrium {
    Regime regime;
    double effort_high = 0.0;
    double threshold_visq = 0.0;
    std::optional<double> cutoff_type;
    double welfare_delta = 0.0;
};

/// P_s(theta) = Pr(theta > mu0 + eps) = Phi((theta - mu0)/sigma_eps).
double choice_probability(const ModelParams& p, double theta);

/// V^IC(theta): switching value of a known type theta against the mu1
/// benchmark. Negative below the benchmark, strictly increasing in theta.
double switching_value_of_type(const ModelParams& p, double theta);

double conditional_switching_value(const BinarySignalEnv& env, double theta);

/// Critical catalytic level c/delta - V^IC(theta_low): above it the receiver
/// explores even a known low type and separation cannot survive.
double collapse_threshold(const BinarySignalEnv& env);

/// Least-cost separating effort of the high type: the e solving the binding
/// low-type mimicry constraint W * P_s(theta_low) = psi(e, theta_low).
double counterfactual_separating_effort(const BinarySignalEnv& env);

/// Equilibrium of the binary game. Requires delta * V^IC(theta_low) < c
/// (otherwise the switching motive alone already sustains exploration of
/// everyone and the game is degenerate); throws std::domain_error naming the
/// always-explore environment when violated. Ties at the threshold classify
/// as pooling.
SignalingEquilibrium solve_binary_equilibrium(const BinarySignalEnv& env);

struct DisruptionWelfare {
    double total;             //  p psi(eH*, thetaH) + (1-p)(delta OV(thetaL) - c)
    double high_type_change;  //  pooling payoff minus separating payoff, high type
    double low_type_change;   //  same, low type
};

/// Welfare effect of moving from the counterfactual separating equilibrium
/// to pooling-with-exploration.
DisruptionWelfare welfare_of_disruption(const BinarySignalEnv& env);

/// Cutoff solve for the continuous game: theta_hat with
/// V^ISQ + V^IC(theta_hat) = c/delta, classified against the support:
/// pooling (everyone explored) when theta_hat <= theta_min, rejection (no
/// one explored) when theta_hat > theta_max, else partial. cutoff_type always
/// carries the unconstrained root; bisection tolerance 1e-8.
SignalingEquilibrium continuous_cutoff(const ContinuousSignalEnv& env);

/// Least-cost effort schedule on the separating region [theta_hat, theta_max]:
/// the cutoff type is indifferent to mimicking any higher type,
/// psi(e(theta), theta_hat) = W * P_s(theta). A reporting convention, not an
/// equilibrium refinement.
double separating_effort(const ContinuousSignalEnv& env, double theta_hat, double theta);

}  // namespace catex
