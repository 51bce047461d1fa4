#include "catex/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "catex/math.hpp"
#include "catex/rng.hpp"

namespace catex {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double precision_decay(double sigma, double tau) {
    return sigma * tau / std::hypot(sigma, tau);
}

// ---------------------------------------------------------------------------
// Restart-formulation Gittins solver
// ---------------------------------------------------------------------------

constexpr int kMeanNodes = 201;
constexpr int kQuadOrder = 16;
constexpr double kRestartTol = 1e-9;

struct GittinsGrid {
    std::vector<double> means;        // uniform grid
    std::vector<double> innovation;   // q_k, k = 0..K-1
    double m0;
    double beta;
    int horizon;                      // K
};

/// Linear interpolation of a value row, clamped at the grid ends.
double interp(const std::vector<double>& grid, const std::vector<double>& v, double x) {
    if (x <= grid.front()) return v.front();
    if (x >= grid.back()) return v.back();
    double step = grid[1] - grid[0];
    double t = (x - grid.front()) / step;
    std::size_t i = std::min(static_cast<std::size_t>(t), grid.size() - 2);
    double w = t - static_cast<double>(i);
    return (1.0 - w) * v[i] + w * v[i + 1];
}

/// One backward pass: value of the restart problem when restarting is worth
/// `restart_value`. Returns E_z V(m0 + q_0 z, 1) (the restart continuation)
/// and optionally the converged table.
double backward_pass(const GittinsGrid& g, double restart_value,
                     std::vector<std::vector<double>>* table_out = nullptr) {
    const GaussHermiteRule& rule = gauss_hermite(kQuadOrder);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);

    // terminal row: posterior frozen, continue forever or restart
    std::vector<double> next(g.means.size());
    for (std::size_t i = 0; i < g.means.size(); ++i) {
        next[i] = std::max(g.means[i] / (1.0 - g.beta), restart_value);
    }
    if (table_out) {
        table_out->assign(g.horizon + 1, {});
        (*table_out)[g.horizon] = next;
    }

    std::vector<double> cur(g.means.size());
    std::vector<double> row1;  // V(., 1), needed for the restart continuation
    for (int k = g.horizon - 1; k >= 0; --k) {
        double q = g.innovation[k];
        for (std::size_t i = 0; i < g.means.size(); ++i) {
            double m = g.means[i];
            double cont;
            if (q == 0.0) {
                cont = interp(g.means, next, m);
            } else {
                double acc = 0.0;
                for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
                    acc += rule.weights[n] *
                           interp(g.means, next, m + M_SQRT2 * q * rule.nodes[n]);
                }
                cont = acc * inv_sqrt_pi;
            }
            cur[i] = std::max(m + g.beta * cont, restart_value);
        }
        if (k == 1) row1 = cur;
        if (table_out) (*table_out)[k] = cur;
        std::swap(cur, next);
    }
    // next now holds V(., 0); row1 holds V(., 1) (or terminal row if K == 1)
    const std::vector<double>& v1 = g.horizon >= 2 ? row1 : next;
    const GaussHermiteRule& rule0 = gauss_hermite(kQuadOrder);
    double q0 = g.innovation.empty() ? 0.0 : g.innovation[0];
    double cont0;
    if (q0 == 0.0) {
        cont0 = interp(g.means, v1, g.m0);
    } else {
        double acc = 0.0;
        for (std::size_t n = 0; n < rule0.nodes.size(); ++n) {
            acc += rule0.weights[n] * interp(g.means, v1, g.m0 + M_SQRT2 * q0 * rule0.nodes[n]);
        }
        cont0 = acc * inv_sqrt_pi;
    }
    return cont0;
}

}  // namespace

DynamicEnv::DynamicEnv(double arrival_rate_, double discount_rate_, const ModelParams& base_)
    : arrival_rate(arrival_rate_), discount_rate(discount_rate_), base(base_) {
    require(arrival_rate > 0.0, "DynamicEnv: arrival_rate must be > 0");
    require(discount_rate > 0.0, "DynamicEnv: discount_rate must be > 0");
}

double hjb_value(const DynamicEnv& env, double sigma) {
    require(sigma >= 0.0, "hjb_value: sigma must be >= 0");
    const ModelParams& p = env.base;
    double perpetuity = p.mu0 / env.discount_rate;
    double v_isq = one_sided_option_value(p.quality_gap(), sigma);
    if (v_isq < p.cost) return perpetuity;
    return perpetuity +
           env.arrival_rate / (env.discount_rate + env.arrival_rate) * (v_isq - p.cost);
}

double hjb_threshold_sigma(double quality_gap, double cost) {
    require(quality_gap >= 0.0, "hjb_threshold_sigma: quality_gap must be >= 0");
    require(cost > 0.0, "hjb_threshold_sigma: cost must be > 0");
    auto excess = [&](double sigma) { return one_sided_option_value(quality_gap, sigma) - cost; };
    double hi = kSqrt2Pi * (cost + quality_gap) + 1.0;
    return bisect_expanding(excess, 0.0, hi, 1e-8, 1e12, "hjb_threshold: unbounded threshold");
}

HjbThreshold hjb_threshold(const DynamicEnv& env) {
    const ModelParams& p = env.base;
    HjbThreshold out;
    out.sigma_bar = hjb_threshold_sigma(p.quality_gap(), p.cost);
    out.high_uncertainty_approx = p.cost * kSqrt2Pi;
    out.approx_valid = p.quality_gap() <= p.cost / 5.0;
    return out;
}

StoppingTrajectory stopping_trajectory(const StoppingState& state, const ModelParams& p) {
    require(state.signal_noise > 0.0, "stopping_trajectory: signal_noise must be > 0");
    require(state.current_sigma >= 0.0, "stopping_trajectory: current_sigma must be >= 0");
    require(p.cost > 0.0, "stopping_trajectory: cost must be > 0 or learning never stops");

    StoppingTrajectory out;
    out.sigma_bar = p.cost * kSqrt2Pi / p.delta;
    out.sigma_bar_undiscounted = p.cost * kSqrt2Pi;
    double sigma = state.current_sigma;
    out.sigma_path.push_back(sigma);
    std::uint64_t round = state.rounds_elapsed;
    while (sigma >= out.sigma_bar) {
        sigma = precision_decay(sigma, state.signal_noise);
        out.sigma_path.push_back(sigma);
        ++round;
    }
    out.stopping_round = round;
    return out;
}

double standard_gittins_index(const BanditArm& arm, double discount) {
    require(discount > 0.0 && discount < 1.0, "gittins: discount must lie in (0,1)");
    require(arm.posterior_sd >= 0.0, "gittins: posterior_sd must be >= 0");
    require(arm.reward_noise >= 0.0, "gittins: reward_noise must be >= 0");
    if (arm.posterior_sd == 0.0) return arm.posterior_mean;  // known arm

    GittinsGrid g;
    g.m0 = arm.posterior_mean;
    g.beta = discount;
    g.horizon = static_cast<int>(std::ceil(std::log(1e-8) / std::log(discount)));
    g.horizon = std::clamp(g.horizon, 2, 4000);

    double s0 = arm.posterior_sd;
    double span = 8.0 * s0;
    g.means.resize(kMeanNodes);
    for (int i = 0; i < kMeanNodes; ++i) {
        g.means[i] = g.m0 - span + 2.0 * span * i / (kMeanNodes - 1);
    }
    g.innovation.resize(g.horizon);
    double v = s0 * s0;
    for (int k = 0; k < g.horizon; ++k) {
        double v_next =
            arm.reward_noise == 0.0
                ? 0.0
                : 1.0 / (1.0 / v + 1.0 / (arm.reward_noise * arm.reward_noise));
        g.innovation[k] = std::sqrt(std::max(v - v_next, 0.0));
        v = v_next;
    }

    // Fixed point of R = m0 + beta * E V_R(m0 + q0 Z, 1), solved by secant
    // with a contraction fallback. R is bracketed by the known-arm value and
    // the best achievable perpetuity.
    auto step = [&](double r) { return g.m0 + g.beta * backward_pass(g, r); };
    double r0 = g.m0 / (1.0 - g.beta);
    double r1 = step(r0);
    double g0 = r1 - r0;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(g0) < kRestartTol) break;
        double g1 = step(r1) - r1;
        double denom = g1 - g0;
        double r2 = std::abs(denom) > 1e-300 ? r1 - g1 * (r1 - r0) / denom : step(r1);
        r0 = r1;
        g0 = g1;
        r1 = r2;
    }
    double restart_value = r1;

    // Monotonicity diagnostic on the converged table.
    std::vector<std::vector<double>> table;
    backward_pass(g, restart_value, &table);
    for (const auto& row : table) {
        for (std::size_t i = 1; i < row.size(); ++i) {
            if (row[i] < row[i - 1] - 1e-7 * (1.0 + std::abs(row[i]))) {
                throw NumericError(
                    "standard_gittins_index: value table not monotone in posterior mean "
                    "(discretization failure)");
            }
        }
    }
    return (1.0 - discount) * restart_value;
}

double modified_gittins_index(const BanditArm& arm, double beta, double discount) {
    require(beta >= 0.0, "modified_gittins_index: beta must be >= 0");
    require(arm.catalytic_info >= 0.0, "modified_gittins_index: catalytic_info must be >= 0");
    return standard_gittins_index(arm, discount) + beta * arm.catalytic_info;
}

PlayLog simulate_bandit(std::vector<BanditArm> arms, double beta, double discount, int horizon,
                        std::uint64_t seed, const std::optional<CatalyticProcess>& process) {
    require(!arms.empty(), "simulate_bandit: need at least one arm");
    require(horizon >= 1, "simulate_bandit: horizon must be >= 1");
    if (process) {
        require(process->benchmark_noise.size() == arms.size(),
                "simulate_bandit: benchmark_noise must have one entry per arm");
        for (double t : process->benchmark_noise) {
            require(t > 0.0, "simulate_bandit: benchmark noise must be > 0");
        }
        require(process->sigma0 >= 0.0, "simulate_bandit: sigma0 must be >= 0");
    }

    PlayLog log;
    double sigma_sq = process ? process->sigma0 : 0.0;

    std::vector<double> standard(arms.size());
    std::vector<bool> stale(arms.size(), true);

    for (int round = 0; round < horizon; ++round) {
        BanditRound rec;
        rec.round = round;
        rec.index.resize(arms.size());
        for (std::size_t i = 0; i < arms.size(); ++i) {
            if (stale[i]) {
                standard[i] = standard_gittins_index(arms[i], discount);
                stale[i] = false;
            }
            if (process) {
                double after = precision_decay(sigma_sq, process->benchmark_noise[i]);
                arms[i].catalytic_info =
                    one_sided_option_value(process->quality_gap, sigma_sq) -
                    one_sided_option_value(process->quality_gap, after);
            }
            rec.index[i] = standard[i] + beta * arms[i].catalytic_info;
        }
        std::size_t pick = 0;
        for (std::size_t i = 1; i < arms.size(); ++i) {
            if (rec.index[i] > rec.index[pick]) pick = i;
        }

        BanditArm& arm = arms[pick];
        Substream rs(seed, static_cast<std::uint64_t>(round));
        double reward = arm.mean_reward + arm.reward_noise * rs.next_normal();

        if (arm.reward_noise == 0.0) {
            arm.posterior_mean = reward;
            arm.posterior_sd = 0.0;
        } else if (arm.posterior_sd > 0.0) {
            double prior_prec = 1.0 / (arm.posterior_sd * arm.posterior_sd);
            double obs_prec = 1.0 / (arm.reward_noise * arm.reward_noise);
            arm.posterior_mean =
                (arm.posterior_mean * prior_prec + reward * obs_prec) / (prior_prec + obs_prec);
            arm.posterior_sd = std::sqrt(1.0 / (prior_prec + obs_prec));
        }
        ++arm.pull_count;
        stale[pick] = true;

        rec.chosen = static_cast<int>(pick);
        rec.reward = reward;
        rec.posterior_mean = arm.posterior_mean;
        rec.posterior_sd = arm.posterior_sd;
        rec.catalytic_credit = beta * arm.catalytic_info;
        if (process) {
            sigma_sq = precision_decay(sigma_sq, process->benchmark_noise[pick]);
        }
        rec.sigma_status_quo = sigma_sq;
        log.rounds.push_back(std::move(rec));
    }
    log.final_arms = std::move(arms);
    log.sigma_status_quo_final = sigma_sq;
    return log;
}

}  // namespace catex
