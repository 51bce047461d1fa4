#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "catex/core_values.hpp"

namespace catex {

/// Infinite-horizon environment: challengers arrive at Poisson rate
/// arrival_rate, payoffs discount at discount_rate.
struct DynamicEnv {
    double arrival_rate;
    double discount_rate;
    ModelParams base;
    DynamicEnv(double arrival_rate, double discount_rate, const ModelParams& base);
};

/// Stationary value at status-quo uncertainty sigma. In the exploration
/// region (V^ISQ(sigma) >= c): mu0/r + lambda/(r+lambda) (V^ISQ(sigma) - c);
/// below it mu0/r. Continuous at the boundary.
double hjb_value(const DynamicEnv& env, double sigma);

struct HjbThreshold {
    double sigma_bar;               // V^ISQ(sigma_bar) = c, bisection tol 1e-8
    double high_uncertainty_approx; // c sqrt(2 pi)
    bool approx_valid;              // within ~2% only when Delta <= c/5
};

HjbThreshold hjb_threshold(const DynamicEnv& env);

/// The sigma solving one_sided_option_value(quality_gap, sigma) = cost;
/// quality_gap >= 0, cost > 0.
double hjb_threshold_sigma(double quality_gap, double cost);

/// Sequential-learning state: posterior sd of the status quo and the
/// per-observation signal noise.
struct StoppingState {
    double current_sigma;
    double signal_noise;
    std::uint64_t rounds_elapsed = 0;
};

struct StoppingTrajectory {
    std::vector<double> sigma_path;        // sigma at rounds_elapsed, +1, ...
    std::uint64_t stopping_round;          // first round with sigma < sigma_bar
    double sigma_bar;                      // c sqrt(2 pi) / delta
    double sigma_bar_undiscounted;         // c sqrt(2 pi)
};

/// Iterates sigma' = sigma tau / sqrt(sigma^2 + tau^2) until the posterior
/// drops below the stopping bar. Requires cost > 0 and signal_noise > 0.
StoppingTrajectory stopping_trajectory(const StoppingState& state, const ModelParams& p);

// ---------------------------------------------------------------------------
// Catalytic bandit
// ---------------------------------------------------------------------------

/// Gaussian bandit arm with conjugate posterior over its mean reward.
/// catalytic_info is the current per-pull resolution of status-quo
/// uncertainty credited to this arm.
struct BanditArm {
    double mean_reward;     // true mean, used only when simulating pulls
    double reward_noise;    // observation sd, >= 0 (0 = one pull reveals all)
    double catalytic_info;  // >= 0
    std::uint64_t pull_count = 0;
    double posterior_mean = 0.0;
    double posterior_sd = 1.0;
};

/// Classical Gittins index of the arm's posterior state, computed by restart
/// value iteration on a (mean x pulls-ahead) grid: 201 mean nodes, horizon
/// truncated where discount^T < 1e-8, restart value solved to 1e-9.
/// Throws NumericError if the converged value function is not monotone in the
/// posterior mean (discretization failure).
double standard_gittins_index(const BanditArm& arm, double discount);

/// G_standard + beta * catalytic_info.
double modified_gittins_index(const BanditArm& arm, double beta, double discount);

/// Status-quo resolution process for the simulator: pulling arm i observes
/// the status quo with noise benchmark_noise[i]; the per-pull credit is the
/// V^ISQ drop along the posterior-sd decay, so total harvest telescopes.
struct CatalyticProcess {
    double quality_gap;
    double sigma0;
    std::vector<double> benchmark_noise;
};

struct BanditRound {
    int round;
    int chosen;
    std::vector<double> index;      // modified index per arm at decision time
    double reward;
    double posterior_mean;          // of the chosen arm, after the update
    double posterior_sd;
    double sigma_status_quo;        // after the pull (sigma0 when no process)
    double catalytic_credit;        // beta * I harvested this round
};

struct PlayLog {
    std::vector<BanditRound> rounds;
    std::vector<BanditArm> final_arms;
    double sigma_status_quo_final;
};

/// Greedy-in-modified-index play with Bayesian posterior updates;
/// deterministic under (seed, config). Ties break toward the lowest index.
PlayLog simulate_bandit(std::vector<BanditArm> arms, double beta, double discount, int horizon,
                        std::uint64_t seed,
                        const std::optional<CatalyticProcess>& process = std::nullopt);

}  // namespace catex
