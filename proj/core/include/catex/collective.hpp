#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "catex/core_values.hpp"

namespace catex {

/// Attention budget spread over independent uncertainty dimensions, each with
/// a prior variance and a signal noise variance.
struct AttentionProblem {
    double budget;
    struct Dim {
        double prior_var;
        double noise_var;
    };
    std::vector<Dim> dims;
    AttentionProblem(double budget, std::vector<Dim> dims);
};

/// a_i = budget * (prior_var_i/noise_var_i) / sum_j (prior_var_j/noise_var_j).
/// Zero-variance dimensions get zero; all-zero signal-to-noise is an error.
std::vector<double> allocate_attention(const AttentionProblem& prob);

/// Binary exploration game on a weighted network. Agent i's payoff from
/// exploring is private_net[i] + spillover_gain * sum_j weights[j][i] * a_j.
struct NetworkGame {
    int n_agents;
    std::vector<std::vector<double>> weights;  // weights[j][i]: link j -> i, zero diagonal
    std::vector<double> private_net;           // V^ISQ + V^IC - c per agent
    double spillover_gain;
    NetworkGame(std::vector<std::vector<double>> weights, std::vector<double> private_net,
                double spillover_gain);
};

double network_payoff(const NetworkGame& g, int agent, const std::vector<int>& profile);

struct EquilibriumPair {
    std::vector<int> least;
    std::vector<int> greatest;
    bool multiplicity;
};

/// Extremal pure Nash profiles by monotone best-response iteration from
/// all-zeros (least) and all-ones (greatest); both verified by a unilateral
/// deviation check. Supermodularity makes the iteration converge in at most
/// n_agents + 1 rounds.
EquilibriumPair network_equilibria(const NetworkGame& g);

// ---------------------------------------------------------------------------
// Sequential exploration cascades
// ---------------------------------------------------------------------------

enum class ChallengerType { low, high };

/// Binary-type sequential environment: agents observe predecessors' actions
/// and a private signal of accuracy q. The embedded ModelParams carries
/// mu1 = prior mean of the type, the benchmark for V^IC(theta).
struct CascadeEnv {
    double prior_high;
    double signal_accuracy;
    double theta_low;
    double theta_high;
    ModelParams base;
    CascadeEnv(const ModelParams& base_like, double theta_low, double theta_high,
               double prior_high, double signal_accuracy);

    /// Explore iff the posterior on the high type reaches this level:
    /// (c/delta - V^ISQ - V^IC(thetaL)) / (V^IC(thetaH) - V^IC(thetaL)).
    double belief_threshold() const;
};

struct CascadeStep {
    int agent;               // 1-based
    bool signal_high;
    double public_belief;    // before the agent's own signal
    double posterior;        // after the agent's own signal
    bool explored;
    bool in_cascade;         // action identical under both signal realizations
};

struct CascadeLog {
    std::vector<CascadeStep> steps;
    std::optional<int> onset_round;      // first agent acting identically under both signals
    double private_expost_loss = 0.0;    // sum over exploring cascade members when type is low
    double externality_loss = 0.0;       // delta * externality per exploring cascade member
};

/// Seeded sequential simulation. Agents explore iff
/// delta (E_mu[V^IC] + V^ISQ) >= c at their Bayesian posterior; actions of
/// non-cascading predecessors reveal their signals.
CascadeLog run_cascade(const CascadeEnv& env, ChallengerType true_type, int n_agents,
                       std::uint64_t seed, double externality = 0.0);

}  // namespace catex
