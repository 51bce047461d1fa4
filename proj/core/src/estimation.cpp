#include "catex/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "catex/core_values.hpp"
#include "catex/math.hpp"
#include "catex/rng.hpp"

namespace catex {

namespace {

/// V^ISQ implied by (sigma_eps, k) where Delta = k * sqrt(sigma_eps^2 + st^2)
/// (combined form) or Delta = k * sigma_eps (main-text form).
double implied_gap(double sigma_eps, double k, double sigma_theta, bool main_text) {
    return main_text ? k * sigma_eps : k * std::hypot(sigma_eps, sigma_theta);
}

}  // namespace

Moments::Moments(double p_explore_, double p_switch_, double sigma_theta_known_)
    : p_explore(p_explore_), p_switch(p_switch_), sigma_theta_known(sigma_theta_known_) {
    if (!(p_explore > 0.0 && p_explore < 1.0)) {
        throw std::invalid_argument("Moments: p_explore must lie strictly inside (0,1)");
    }
    if (!(p_switch > 0.0 && p_switch < 1.0)) {
        throw std::invalid_argument("Moments: p_switch must lie strictly inside (0,1)");
    }
    if (!(sigma_theta_known >= 0.0)) {
        throw std::invalid_argument("Moments: sigma_theta_known must be >= 0");
    }
}

EstimationResult invert_moments(const Moments& m, const CostDistribution& cost_dist, double delta,
                                const EstimationOptions& options) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("invert_moments: delta must lie in (0,1]");
    }
    if (!cost_dist.invertible()) {
        throw std::domain_error("invert_moments: cost family must be invertible (not fixed)");
    }

    // Switch moment, closed inverse.
    double k = -norm_quantile(m.p_switch);
    double target = cost_dist.quantile(m.p_explore);

    auto moment_value = [&](double sigma) {
        double gap = implied_gap(sigma, k, m.sigma_theta_known, options.main_text_switch_moment);
        double spread =
            options.use_total_option_value ? std::hypot(sigma, m.sigma_theta_known) : sigma;
        return delta * one_sided_option_value(gap, spread);
    };
    auto excess = [&](double sigma) { return moment_value(sigma) - target; };

    const double lo = 1e-12;
    if (excess(lo) > 0.0) {
        throw std::domain_error(
            "invert_moments: exploration moment infeasible (implied value exceeds the target even "
            "as sigma_eps -> 0, given the switch moment)");
    }
    double sigma_hat;
    try {
        sigma_hat = bisect_expanding(excess, lo, 1.0, 1e-12, 1e12,
                                     "invert_moments: exploration moment");
    } catch (const NumericError&) {
        throw std::domain_error(
            "invert_moments: exploration moment infeasible (no sigma_eps matches the target)");
    }

    EstimationResult out;
    out.sigma_eps_hat = sigma_hat;
    out.delta_hat = implied_gap(sigma_hat, k, m.sigma_theta_known, options.main_text_switch_moment);
    out.v_isq_hat = one_sided_option_value(out.delta_hat, sigma_hat);

    double switch_back =
        options.main_text_switch_moment
            ? (sigma_hat > 0.0 ? norm_cdf(-out.delta_hat / sigma_hat) : 0.0)
            : norm_cdf(-out.delta_hat / std::hypot(sigma_hat, m.sigma_theta_known));
    out.convergence.residual_switch = std::abs(switch_back - m.p_switch);
    out.convergence.residual_explore = std::abs(cost_dist.cdf(moment_value(sigma_hat)) - m.p_explore);
    out.convergence.iterations = 0;  // closed inverse + bisection; not tracked separately
    out.convergence.converged = out.convergence.residual_switch < 1e-8 &&
                                out.convergence.residual_explore < 1e-8;
    return out;
}

BootstrapResult bootstrap_se(std::span<const Moments> resamples,
                             const CostDistribution& cost_dist, double delta,
                             const EstimationOptions& options) {
    if (resamples.size() < 100) {
        throw std::invalid_argument("bootstrap_se: need at least 100 resamples");
    }
    std::vector<double> sigmas, gaps, values;
    std::size_t infeasible = 0;
    for (const Moments& m : resamples) {
        try {
            EstimationResult r = invert_moments(m, cost_dist, delta, options);
            sigmas.push_back(r.sigma_eps_hat);
            gaps.push_back(r.delta_hat);
            values.push_back(r.v_isq_hat);
        } catch (const std::domain_error&) {
            ++infeasible;
        }
    }

    // Percentile standard error: half the central 68.27% interval.
    auto percentile_se = [](std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        std::sort(v.begin(), v.end());
        auto at = [&](double q) {
            double pos = q * static_cast<double>(v.size() - 1);
            std::size_t i = static_cast<std::size_t>(pos);
            double w = pos - static_cast<double>(i);
            return i + 1 < v.size() ? (1.0 - w) * v[i] + w * v[i + 1] : v[i];
        };
        return 0.5 * (at(0.841344746) - at(0.158655254));
    };

    BootstrapResult out;
    out.se_sigma_eps = percentile_se(sigmas);
    out.se_delta = percentile_se(gaps);
    out.se_v_isq = percentile_se(values);
    out.infeasible_rate = static_cast<double>(infeasible) / static_cast<double>(resamples.size());
    out.flagged = out.infeasible_rate > 0.10;
    return out;
}

std::vector<Moments> resample_moments(const Moments& m, std::uint64_t sample_size, int count,
                                      std::uint64_t seed) {
    if (sample_size == 0) throw std::invalid_argument("resample_moments: sample_size must be >= 1");
    if (count < 1) throw std::invalid_argument("resample_moments: count must be >= 1");
    std::vector<Moments> out;
    out.reserve(static_cast<std::size_t>(count));
    double n = static_cast<double>(sample_size);
    for (int r = 0; r < count; ++r) {
        Substream rs(seed, static_cast<std::uint64_t>(r));
        // normal approximation to the binomial resample, clamped interior
        double pe = m.p_explore + std::sqrt(m.p_explore * (1.0 - m.p_explore) / n) * rs.next_normal();
        double ps = m.p_switch + std::sqrt(m.p_switch * (1.0 - m.p_switch) / n) * rs.next_normal();
        pe = std::clamp(pe, 1e-9, 1.0 - 1e-9);
        ps = std::clamp(ps, 1e-9, 1.0 - 1e-9);
        out.emplace_back(pe, ps, m.sigma_theta_known);
    }
    return out;
}

}  // namespace catex
