#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "catex/cost_distribution.hpp"

namespace catex {

/// Observed reduced-form moments: exploration probability and the switching
/// probability, with the challenger dispersion supplied as known.
struct Moments {
    double p_explore;
    double p_switch;
    double sigma_theta_known;
    Moments(double p_explore, double p_switch, double sigma_theta_known);
};

struct EstimationDiagnostics {
    int iterations;
    double residual_explore;
    double residual_switch;
    bool converged;
};

struct EstimationResult {
    double sigma_eps_hat;
    double delta_hat;   // recovered quality gap mu0 - mu1
    double v_isq_hat;
    EstimationDiagnostics convergence;
};

struct EstimationOptions {
    /// Use Phi(-Delta/sigma_eps) for the switch moment instead of the
    /// combined-variance form.
    bool main_text_switch_moment = false;
    /// Exploration moment driven by delta*(V^ISQ + V^IC) instead of
    /// delta*V^ISQ alone.
    bool use_total_option_value = false;
};

/// Method-of-moments inversion: the switch moment pins k = Delta /
/// sqrt(sigma_eps^2 + sigma_theta^2) in closed form (k = -Phi^{-1}(p_switch)),
/// then a 1-d root in sigma_eps matches the exploration moment
/// p_explore = F_c(delta * V^ISQ). Residuals below 1e-8 at the returned
/// estimates. Throws std::domain_error naming the binding moment when no
/// root exists; the cost family must be invertible.
EstimationResult invert_moments(const Moments& m, const CostDistribution& cost_dist, double delta,
                                const EstimationOptions& options = {});

struct BootstrapResult {
    double se_sigma_eps;
    double se_delta;
    double se_v_isq;
    double infeasible_rate;
    bool flagged;  // more than 10% of resamples failed to invert
};

/// Percentile standard errors over pre-resampled moment vectors (>= 100).
BootstrapResult bootstrap_se(std::span<const Moments> resamples,
                             const CostDistribution& cost_dist, double delta,
                             const EstimationOptions& options = {});

/// Binomial resampling of both observed moments at the given sample size;
/// deterministic under seed.
std::vector<Moments> resample_moments(const Moments& m, std::uint64_t sample_size, int count,
                                      std::uint64_t seed);

}  // namespace catex
