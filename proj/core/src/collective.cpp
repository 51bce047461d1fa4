#include "catex/collective.hpp"

#include <cmath>
#include <limits>

#include "catex/math.hpp"
#include "catex/rng.hpp"
#include "catex/signaling.hpp"

namespace catex {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

ModelParams rebase(const ModelParams& base, double mu1) {
    return ModelParams(base.mu0, mu1, base.sigma_eps, base.sigma_theta, base.cost, base.delta);
}

}  // namespace

AttentionProblem::AttentionProblem(double budget_, std::vector<Dim> dims_)
    : budget(budget_), dims(std::move(dims_)) {
    require(budget > 0.0, "AttentionProblem: budget must be > 0");
    require(!dims.empty(), "AttentionProblem: need at least one dimension");
    for (const Dim& d : dims) {
        require(d.prior_var >= 0.0, "AttentionProblem: prior variances must be >= 0");
        require(d.noise_var > 0.0, "AttentionProblem: noise variances must be > 0");
    }
}

std::vector<double> allocate_attention(const AttentionProblem& prob) {
    double total_snr = 0.0;
    for (const auto& d : prob.dims) total_snr += d.prior_var / d.noise_var;
    if (total_snr <= 0.0) {
        throw std::domain_error("allocate_attention: all signal-to-noise ratios are zero");
    }
    std::vector<double> out;
    out.reserve(prob.dims.size());
    for (const auto& d : prob.dims) {
        out.push_back(prob.budget * (d.prior_var / d.noise_var) / total_snr);
    }
    return out;
}

NetworkGame::NetworkGame(std::vector<std::vector<double>> weights_,
                         std::vector<double> private_net_, double spillover_gain_)
    : n_agents(static_cast<int>(private_net_.size())), weights(std::move(weights_)),
      private_net(std::move(private_net_)), spillover_gain(spillover_gain_) {
    require(n_agents >= 1, "NetworkGame: need at least one agent");
    require(spillover_gain > 0.0, "NetworkGame: spillover_gain must be > 0");
    require(weights.size() == static_cast<std::size_t>(n_agents),
            "NetworkGame: weights must be n x n");
    for (int j = 0; j < n_agents; ++j) {
        require(weights[j].size() == static_cast<std::size_t>(n_agents),
                "NetworkGame: weights must be n x n");
        require(weights[j][j] == 0.0, "NetworkGame: weight diagonal must be zero");
        for (double w : weights[j]) {
            require(w >= 0.0 && w <= 1.0, "NetworkGame: weights must lie in [0,1]");
        }
    }
}

namespace {

/// Marginal payoff of exploring given others' actions.
double explore_gain(const NetworkGame& g, int agent, const std::vector<int>& profile) {
    double spill = 0.0;
    for (int j = 0; j < g.n_agents; ++j) {
        if (j != agent && profile[j]) spill += g.weights[j][agent];
    }
    return g.private_net[agent] + g.spillover_gain * spill;
}

}  // namespace

double network_payoff(const NetworkGame& g, int agent, const std::vector<int>& profile) {
    return profile[agent] ? explore_gain(g, agent, profile) : 0.0;
}

namespace {

/// Monotone best-response sweep. strict_in selects the smallest (ties -> 0)
/// or largest (ties -> 1) best-response when an agent is indifferent.
std::vector<int> iterate_best_response(const NetworkGame& g, std::vector<int> profile,
                                       bool ties_explore) {
    for (int round = 0; round <= g.n_agents; ++round) {
        bool changed = false;
        for (int i = 0; i < g.n_agents; ++i) {
            double gain = explore_gain(g, i, profile);
            int br = ties_explore ? (gain >= 0.0 ? 1 : 0) : (gain > 0.0 ? 1 : 0);
            if (br != profile[i]) {
                profile[i] = br;
                changed = true;
            }
        }
        if (!changed) return profile;
    }
    throw NumericError("network_equilibria: best-response iteration failed to converge");
}

bool is_nash(const NetworkGame& g, const std::vector<int>& profile) {
    for (int i = 0; i < g.n_agents; ++i) {
        double gain = explore_gain(g, i, profile);
        if (profile[i] == 1 && gain < 0.0) return false;
        if (profile[i] == 0 && gain > 0.0) return false;
    }
    return true;
}

}  // namespace

EquilibriumPair network_equilibria(const NetworkGame& g) {
    EquilibriumPair out;
    out.least = iterate_best_response(g, std::vector<int>(g.n_agents, 0), /*ties_explore=*/false);
    out.greatest = iterate_best_response(g, std::vector<int>(g.n_agents, 1), /*ties_explore=*/true);
    if (!is_nash(g, out.least) || !is_nash(g, out.greatest)) {
        throw NumericError("network_equilibria: extremal profile failed the deviation check");
    }
    out.multiplicity = out.least != out.greatest;
    return out;
}

CascadeEnv::CascadeEnv(const ModelParams& base_like, double theta_low_, double theta_high_,
                       double prior_high_, double signal_accuracy_)
    : prior_high(prior_high_), signal_accuracy(signal_accuracy_), theta_low(theta_low_),
      theta_high(theta_high_),
      base(rebase(base_like, prior_high_ * theta_high_ + (1.0 - prior_high_) * theta_low_)) {
    require(theta_low < theta_high, "CascadeEnv: theta_low must be below theta_high");
    require(prior_high > 0.0 && prior_high < 1.0, "CascadeEnv: prior_high must lie in (0,1)");
    require(signal_accuracy > 0.5 && signal_accuracy < 1.0,
            "CascadeEnv: signal_accuracy must lie in (0.5, 1)");
}

double CascadeEnv::belief_threshold() const {
    double vic_low = switching_value_of_type(base, theta_low);
    double vic_high = switching_value_of_type(base, theta_high);
    double v_isq = catalytic_value(base);
    double numer = base.cost / base.delta - v_isq - vic_low;
    double denom = vic_high - vic_low;
    if (denom <= 0.0) {
        // beliefs cannot matter; explore always or never
        return numer <= 0.0 ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
    }
    return numer / denom;
}

CascadeLog run_cascade(const CascadeEnv& env, ChallengerType true_type, int n_agents,
                       std::uint64_t seed, double externality) {
    require(n_agents >= 1, "run_cascade: n_agents must be >= 1");
    require(externality >= 0.0, "run_cascade: externality must be >= 0");

    const double q = env.signal_accuracy;
    const double mu_star = env.belief_threshold();
    const bool type_high = true_type == ChallengerType::high;

    auto bayes = [&](double prior, bool high_signal) {
        double like_h = high_signal ? q : 1.0 - q;
        double like_l = high_signal ? 1.0 - q : q;
        return prior * like_h / (prior * like_h + (1.0 - prior) * like_l);
    };

    CascadeLog log;
    double public_belief = env.prior_high;

    for (int i = 1; i <= n_agents; ++i) {
        Substream rs(seed, static_cast<std::uint64_t>(i));
        bool signal_high = rs.next_uniform() < (type_high ? q : 1.0 - q);

        bool explore_if_high = bayes(public_belief, true) >= mu_star;
        bool explore_if_low = bayes(public_belief, false) >= mu_star;
        bool in_cascade = explore_if_high == explore_if_low;

        CascadeStep step;
        step.agent = i;
        step.signal_high = signal_high;
        step.public_belief = public_belief;
        step.posterior = bayes(public_belief, signal_high);
        step.explored = signal_high ? explore_if_high : explore_if_low;
        step.in_cascade = in_cascade;
        log.steps.push_back(step);

        if (in_cascade) {
            if (!log.onset_round) log.onset_round = i;
            // action reveals nothing; public belief frozen
            if (step.explored) {
                if (!type_high) {
                    double ov_low = catalytic_value(env.base) +
                                    switching_value_of_type(env.base, env.theta_low);
                    log.private_expost_loss += env.base.cost - env.base.delta * ov_low;
                }
                log.externality_loss += env.base.delta * externality;
            }
        } else {
            // informative action: observers invert the signal exactly
            public_belief = step.posterior;
        }
    }
    return log;
}

}  // namespace catex
