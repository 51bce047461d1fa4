// catex: command-line surface over the exploration-value library.
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 numerical
// failure. Every numeric default equals the baseline calibration
// (mu0=10, mu1=5, c=1, delta=0.9, sigma_theta=1). Option precedence is
// flag > config file > default; CATEX_SEED overrides the default seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "catex/collective.hpp"
#include "catex/core_values.hpp"
#include "catex/dynamics.hpp"
#include "catex/estimation.hpp"
#include "catex/info_design.hpp"
#include "catex/math.hpp"
#include "catex/montecarlo.hpp"
#include "catex/signaling.hpp"
#include "catex/welfare_policy.hpp"

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CATEX_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("CATEX_SEED is not a valid unsigned integer");
        }
    }
    return 42;
}

int default_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// A set flag participates in precedence; an unset one defers to file/default.
std::optional<bool> flag_opt(bool set) {
    return set ? std::optional<bool>(true) : std::nullopt;
}

/// Loads the config file and rejects unknown keys with the full valid list.
json load_config(const std::string& path, const std::set<std::string>& valid_keys) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        (void)value;
        if (!valid_keys.count(key)) {
            std::string list;
            for (const auto& k : valid_keys) list += "\n  " + k;
            throw ConfigError("unknown config key '" + key + "'; valid keys are:" + list);
        }
    }
    return cfg;
}

/// flag > file > default.
template <typename T>
T pick(const std::optional<T>& flag, const json& file, const std::string& key, T def) {
    if (flag) return *flag;
    if (file.contains(key)) return file.at(key).get<T>();
    return def;
}

struct CommonFlags {
    std::string config_path;
    std::string output_path;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonFlags& c) {
    cmd->add_option("--config", c.config_path, "JSON config file (flags take precedence)");
    cmd->add_option("--output", c.output_path, "write result to this file instead of stdout");
    cmd->add_option("--format", c.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", c.seed, "random seed (64-bit unsigned)");
    cmd->add_option("--workers", c.workers, "worker threads for simulation commands");
}

const std::set<std::string> kParamKeys = {"mu0", "mu1", "sigma_eps", "sigma_theta",
                                          "cost", "delta", "seed", "workers"};

std::set<std::string> with_param_keys(std::initializer_list<const char*> extra) {
    std::set<std::string> keys = kParamKeys;
    for (const char* k : extra) keys.insert(k);
    return keys;
}

struct ParamFlags {
    std::optional<double> mu0, mu1, sigma_eps, sigma_theta, cost, delta;
};

void add_params(CLI::App* cmd, ParamFlags& p) {
    cmd->add_option("--mu0", p.mu0, "status quo baseline payoff (default 10)");
    cmd->add_option("--mu1", p.mu1, "challenger mean quality (default 5)");
    cmd->add_option("--sigma-eps", p.sigma_eps, "status quo uncertainty (default 10)");
    cmd->add_option("--sigma-theta", p.sigma_theta, "challenger dispersion (default 1)");
    cmd->add_option("--cost", p.cost, "exploration cost (default 1)");
    cmd->add_option("--delta", p.delta, "discount factor in (0,1] (default 0.9)");
}

catex::ModelParams resolve_params(const ParamFlags& f, const json& file) {
    return catex::ModelParams(pick(f.mu0, file, "mu0", 10.0), pick(f.mu1, file, "mu1", 5.0),
                              pick(f.sigma_eps, file, "sigma_eps", 10.0),
                              pick(f.sigma_theta, file, "sigma_theta", 1.0),
                              pick(f.cost, file, "cost", 1.0),
                              pick(f.delta, file, "delta", 0.9));
}

std::uint64_t resolve_seed(const CommonFlags& c, const json& file) {
    return pick(c.seed, file, "seed", default_seed());
}

int resolve_workers(const CommonFlags& c, const json& file) {
    int w = pick(c.workers, file, "workers", default_workers());
    if (w < 1) throw ConfigError("workers must be >= 1");
    return w;
}

/// Scalar record -> two-line CSV.
void write_flat_csv(std::ostream& os, const json& obj) {
    bool first = true;
    for (const auto& [key, value] : obj.items()) {
        if (value.is_structured()) continue;
        os << (first ? "" : ",") << key;
        first = false;
    }
    os << '\n';
    first = true;
    for (const auto& [key, value] : obj.items()) {
        if (value.is_structured()) continue;
        (void)key;
        os << (first ? "" : ",") << value.dump();
        first = false;
    }
    os << '\n';
}

/// Emits a scalar record respecting --output/--format.
void emit(const CommonFlags& c, json obj) {
    obj["schema_version"] = kSchemaVersion;
    std::ostream* os = &std::cout;
    std::ofstream out;
    if (!c.output_path.empty()) {
        out.open(c.output_path);
        if (!out) throw ConfigError("cannot open output file: " + c.output_path);
        os = &out;
    }
    if (c.format == "csv") {
        write_flat_csv(*os, obj);
    } else {
        *os << obj.dump(2) << '\n';
    }
}

/// Emits prepared text (already CSV) or a JSON document per --format.
void emit_table(const CommonFlags& c, const std::string& csv_text, json json_doc) {
    json_doc["schema_version"] = kSchemaVersion;
    std::ostream* os = &std::cout;
    std::ofstream out;
    if (!c.output_path.empty()) {
        out.open(c.output_path);
        if (!out) throw ConfigError("cannot open output file: " + c.output_path);
        os = &out;
    }
    if (c.format == "csv") {
        *os << csv_text;
    } else {
        *os << json_doc.dump(2) << '\n';
    }
}

catex::CostDistribution resolve_cost_dist(const std::optional<std::string>& kind_flag,
                                          const std::optional<double>& mean_flag,
                                          const std::optional<double>& log_mu_flag,
                                          const std::optional<double>& log_sigma_flag,
                                          const json& file, double fixed_cost,
                                          const std::string& default_kind = "fixed") {
    std::string kind = pick(kind_flag, file, "cost_dist", default_kind);
    if (kind == "fixed") return catex::CostDistribution::fixed(fixed_cost);
    if (kind == "exponential") {
        return catex::CostDistribution::exponential(pick(mean_flag, file, "cost_mean", 1.0));
    }
    if (kind == "lognormal") {
        return catex::CostDistribution::lognormal(pick(log_mu_flag, file, "cost_log_mu", 0.0),
                                                  pick(log_sigma_flag, file, "cost_log_sigma", 1.0));
    }
    throw ConfigError("cost_dist must be fixed, exponential or lognormal");
}

json params_json(const catex::ModelParams& p) {
    return {{"mu0", p.mu0},       {"mu1", p.mu1},   {"sigma_eps", p.sigma_eps},
            {"sigma_theta", p.sigma_theta}, {"cost", p.cost}, {"delta", p.delta}};
}

// ---------------------------------------------------------------------------
// value
// ---------------------------------------------------------------------------

int cmd_value(const CommonFlags& common, const ParamFlags& pf, std::optional<double> gamma,
              std::optional<double> dof, bool derivatives, bool asymptote) {
    json file = load_config(common.config_path,
                            with_param_keys({"gamma", "dof", "derivatives", "asymptote"}));
    catex::ModelParams p = resolve_params(pf, file);
    catex::OptionValueBreakdown ov = catex::decompose_option_value(p);

    json out = {{"params", params_json(p)},
                {"v_isq", ov.v_isq},
                {"v_ic", ov.v_ic},
                {"total", ov.total},
                {"switch_prob", ov.switch_prob}};
    if (pick(flag_opt(derivatives), file, "derivatives", false)) {
        out["d_v_isq_d_sigma"] = catex::catalytic_derivative_sigma(p);
        out["d_v_isq_d_delta"] = catex::catalytic_derivative_delta(p);
    }
    if (pick(flag_opt(asymptote), file, "asymptote", false)) {
        out["asymptote"] = catex::catalytic_asymptote(p);
    }
    if (auto g = pick(gamma, file, "gamma", 0.0); g > 0.0) {
        out["cara_v_isq"] = catex::cara_catalytic_value(p, catex::CaraParams(g));
    }
    if (auto nu = pick(dof, file, "dof", 0.0); nu > 0.0) {
        out["heavy_tail_v_isq"] = catex::heavy_tail_catalytic_value(p, nu);
    }
    emit(common, std::move(out));
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const CommonFlags& common, const ParamFlags& pf, std::vector<double> grid_flag,
              std::optional<std::uint64_t> iters, const std::optional<std::string>& cost_kind,
              const std::optional<double>& cost_mean, const std::optional<double>& cost_log_mu,
              const std::optional<double>& cost_log_sigma) {
    json file = load_config(common.config_path,
                            with_param_keys({"grid", "iters", "cost_dist", "cost_mean",
                                             "cost_log_mu", "cost_log_sigma"}));
    catex::ModelParams p = resolve_params(pf, file);
    std::vector<double> grid = grid_flag;
    if (grid.empty() && file.contains("grid")) grid = file.at("grid").get<std::vector<double>>();
    if (grid.empty()) grid = {1.0, 5.0, 10.0, 15.0, 20.0};
    std::uint64_t n = pick(iters, file, "iters", std::uint64_t{10000});

    catex::CostDistribution dist =
        resolve_cost_dist(cost_kind, cost_mean, cost_log_mu, cost_log_sigma, file, p.cost);
    catex::SimConfig config(p, n, resolve_seed(common, file), dist,
                            resolve_workers(common, file));
    std::vector<catex::SimulationReport> reports = catex::run_sweep(config, grid);

    std::ostringstream csv;
    catex::write_sweep_csv(csv, config, reports);
    json doc = {{"rows", catex::sweep_to_json(config, reports)}, {"seed", config.seed}};
    emit_table(common, csv.str(), std::move(doc));
    return 0;
}

// ---------------------------------------------------------------------------
// signal
// ---------------------------------------------------------------------------

json equilibrium_json(const catex::SignalingEquilibrium& eq) {
    json out = {{"regime", std::string(catex::regime_name(eq.regime))},
                {"effort_high", eq.effort_high},
                {"threshold_visq", eq.threshold_visq},
                {"welfare_delta", eq.welfare_delta}};
    if (eq.cutoff_type) out["cutoff_type"] = *eq.cutoff_type;
    return out;
}

int cmd_signal(const CommonFlags& common, const ParamFlags& pf, std::optional<double> theta_low,
               std::optional<double> theta_high, std::optional<double> prior_high,
               std::optional<double> reward, std::optional<double> cost_exponent,
               bool reward_on_exploration, std::vector<double> sweep_visq, bool continuous,
               std::optional<double> theta_min, std::optional<double> theta_max) {
    json file = load_config(
        common.config_path,
        with_param_keys({"theta_low", "theta_high", "prior_high", "reward", "cost_exponent",
                         "reward_on_exploration", "continuous", "theta_min", "theta_max"}));
    catex::ModelParams p = resolve_params(pf, file);
    catex::SignalingCost cost{pick(cost_exponent, file, "cost_exponent", 1.0)};

    if (pick(flag_opt(continuous), file, "continuous", false)) {
        catex::ContinuousSignalEnv env(p, pick(theta_min, file, "theta_min", 0.0),
                                       pick(theta_max, file, "theta_max", 9.0),
                                       pick(reward, file, "reward", 10.0), cost);
        emit(common, equilibrium_json(catex::continuous_cutoff(env)));
        return 0;
    }

    auto make_env = [&](const catex::ModelParams& params) {
        return catex::BinarySignalEnv(
            params, pick(theta_low, file, "theta_low", 3.0), pick(theta_high, file, "theta_high", 7.0),
            pick(prior_high, file, "prior_high", 0.5), pick(reward, file, "reward", 10.0), cost,
            reward_on_exploration);
    };

    if (!sweep_visq.empty()) {
        // Step data: equilibrium along a sigma_eps grid.
        std::ostringstream csv;
        csv << "sigma_eps,v_isq,threshold_visq,regime,effort_high\n";
        json rows = json::array();
        for (double sigma : sweep_visq) {
            catex::BinarySignalEnv env = make_env(p.with_sigma_eps(sigma));
            catex::SignalingEquilibrium eq = catex::solve_binary_equilibrium(env);
            double v_isq = catex::catalytic_value(env.base);
            char buf[160];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s,%.17g\n", sigma, v_isq,
                          eq.threshold_visq, catex::regime_name(eq.regime).data(), eq.effort_high);
            csv << buf;
            rows.push_back({{"sigma_eps", sigma},
                            {"v_isq", v_isq},
                            {"threshold_visq", eq.threshold_visq},
                            {"regime", std::string(catex::regime_name(eq.regime))},
                            {"effort_high", eq.effort_high}});
        }
        emit_table(common, csv.str(), json{{"rows", rows}});
        return 0;
    }

    catex::BinarySignalEnv env = make_env(p);
    catex::SignalingEquilibrium eq = catex::solve_binary_equilibrium(env);
    json out = equilibrium_json(eq);
    out["v_isq"] = catex::catalytic_value(env.base);
    out["v_ic_theta_low"] = catex::conditional_switching_value(env, env.theta_low);
    emit(common, std::move(out));
    return 0;
}

// ---------------------------------------------------------------------------
// info
// ---------------------------------------------------------------------------

int cmd_info(const CommonFlags& common, const ParamFlags& pf, std::optional<double> kappa_eta,
             std::optional<double> kappa_xi, bool probe, std::optional<double> paradox_externality,
             std::optional<double> cost_mass) {
    json file = load_config(common.config_path,
                            with_param_keys({"kappa_eta", "kappa_xi", "probe",
                                             "paradox_externality", "cost_mass"}));
    catex::ModelParams p = resolve_params(pf, file);
    catex::InfoCosts costs(pick(kappa_eta, file, "kappa_eta", 0.5),
                           pick(kappa_xi, file, "kappa_xi", 0.5));

    if (pick(flag_opt(probe), file, "probe", false)) {
        catex::ComplementarityReport rep = catex::complementarity_probe(p, costs);
        emit(common, json{{"sigma_low", rep.sigma_low},
                          {"sigma_high", rep.sigma_high},
                          {"tau_eta_at_low", rep.tau_eta_at_low},
                          {"tau_eta_at_high", rep.tau_eta_at_high},
                          {"complementarity", rep.complementarity},
                          {"substitution_separable", rep.substitution_separable},
                          {"substitution_constrained", rep.substitution_constrained},
                          {"budget", rep.budget},
                          {"at_corner", rep.at_corner}});
        return 0;
    }

    double externality = pick(paradox_externality, file, "paradox_externality", -1.0);
    if (externality >= 0.0) {
        catex::ParadoxVerdict v = catex::it_paradox_check(
            p, costs, externality, pick(cost_mass, file, "cost_mass", 1.0));
        emit(common, json{{"paradox", v.paradox},
                          {"externality_side", v.externality_side},
                          {"private_side", v.private_side},
                          {"d_pi_d_kappa_eta", v.d_pi_d_kappa_eta},
                          {"tau_eta_star", v.tau_eta_star}});
        return 0;
    }

    catex::PrecisionChoice choice = catex::optimize_precision(p, costs);
    json out = {{"tau_eta", choice.tau_eta},
                {"tau_xi", choice.tau_xi},
                {"posterior_vol_eps", choice.posterior_vol_eps},
                {"posterior_vol_theta", choice.posterior_vol_theta},
                {"net_value", choice.net_value},
                {"converged", choice.converged},
                {"no_learning_sentinel", catex::kNoLearningNoise}};
    if (!choice.converged) {
        std::cerr << "info: optimizer did not converge; best point reported\n" << out.dump(2) << '\n';
        return 3;
    }
    emit(common, std::move(out));
    return 0;
}

// ---------------------------------------------------------------------------
// policy
// ---------------------------------------------------------------------------

int cmd_policy(const CommonFlags& common, const ParamFlags& pf, std::optional<double> externality,
               std::optional<double> spillover, std::vector<double> sweep_grid,
               std::optional<std::uint64_t> iters, const std::optional<std::string>& cost_kind,
               const std::optional<double>& cost_mean, const std::optional<double>& cost_log_mu,
               const std::optional<double>& cost_log_sigma) {
    json file = load_config(common.config_path,
                            with_param_keys({"externality", "spillover", "sweep", "iters",
                                             "cost_dist", "cost_mean", "cost_log_mu",
                                             "cost_log_sigma"}));
    catex::ModelParams p = resolve_params(pf, file);
    catex::ExternalityEnv env(pick(externality, file, "externality", 1.0),
                              pick(spillover, file, "spillover", 0.0));

    if (sweep_grid.empty() && file.contains("sweep")) {
        sweep_grid = file.at("sweep").get<std::vector<double>>();
    }
    if (!sweep_grid.empty()) {
        catex::CostDistribution dist =
            resolve_cost_dist(cost_kind, cost_mean, cost_log_mu, cost_log_sigma, file, p.cost);
        catex::SimConfig config(p, pick(iters, file, "iters", std::uint64_t{10000}),
                                resolve_seed(common, file), dist, resolve_workers(common, file));
        std::vector<catex::WelfareRow> rows =
            catex::welfare_sweep(config, env.inspection_cost, sweep_grid);
        std::ostringstream csv;
        catex::write_welfare_csv(csv, rows);
        emit_table(common, csv.str(), json{{"rows", catex::welfare_to_json(rows)}});
        return 0;
    }

    catex::PolicyBundle bundle = catex::optimal_policy(p, env);
    emit(common, json{{"social_net_value", catex::social_net_value(p, env)},
                      {"exploration_tax", bundle.exploration_tax},
                      {"matching_subsidy", bundle.matching_subsidy},
                      {"net_stance", std::string(catex::stance_name(bundle.net_stance))}});
    return 0;
}

// ---------------------------------------------------------------------------
// dynamics
// ---------------------------------------------------------------------------

int cmd_dynamics_threshold(const CommonFlags& common, std::optional<double> gap,
                           std::optional<double> cost) {
    json file = load_config(common.config_path, {"delta_gap", "cost", "seed", "workers"});
    double g = pick(gap, file, "delta_gap", 5.0);
    double c = pick(cost, file, "cost", 1.0);
    if (g < 0.0) throw ConfigError("delta-gap must be >= 0");
    if (c <= 0.0) throw ConfigError("cost must be > 0");
    emit(common, json{{"sigma_bar", catex::hjb_threshold_sigma(g, c)},
                      {"high_uncertainty_approx", c * catex::kSqrt2Pi},
                      {"approx_valid", g <= c / 5.0}});
    return 0;
}

int cmd_dynamics_value(const CommonFlags& common, const ParamFlags& pf, std::optional<double> sigma,
                       std::optional<double> arrival, std::optional<double> discount_rate) {
    json file = load_config(common.config_path,
                            with_param_keys({"sigma", "arrival_rate", "discount_rate"}));
    catex::ModelParams p = resolve_params(pf, file);
    catex::DynamicEnv env(pick(arrival, file, "arrival_rate", 1.0),
                          pick(discount_rate, file, "discount_rate", 0.05), p);
    double s = pick(sigma, file, "sigma", p.sigma_eps);
    catex::HjbThreshold thr = catex::hjb_threshold(env);
    emit(common, json{{"value", catex::hjb_value(env, s)},
                      {"sigma", s},
                      {"sigma_bar", thr.sigma_bar},
                      {"high_uncertainty_approx", thr.high_uncertainty_approx},
                      {"approx_valid", thr.approx_valid}});
    return 0;
}

int cmd_dynamics_stopping(const CommonFlags& common, const ParamFlags& pf,
                          std::optional<double> sigma0, std::optional<double> tau) {
    json file = load_config(common.config_path, with_param_keys({"sigma0", "tau"}));
    catex::ModelParams p = resolve_params(pf, file);
    catex::StoppingState state{pick(sigma0, file, "sigma0", p.sigma_eps),
                               pick(tau, file, "tau", 10.0), 0};
    catex::StoppingTrajectory traj = catex::stopping_trajectory(state, p);

    std::ostringstream csv;
    csv << "round,sigma\n";
    for (std::size_t t = 0; t < traj.sigma_path.size(); ++t) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", t, traj.sigma_path[t]);
        csv << buf;
    }
    emit_table(common, csv.str(),
               json{{"sigma_bar", traj.sigma_bar},
                    {"sigma_bar_undiscounted", traj.sigma_bar_undiscounted},
                    {"stopping_round", traj.stopping_round},
                    {"path", traj.sigma_path}});
    return 0;
}

int cmd_dynamics_gittins(const CommonFlags& common, std::optional<double> mean,
                         std::optional<double> sd, std::optional<double> noise,
                         std::optional<double> info, std::optional<double> beta,
                         std::optional<double> discount) {
    json file = load_config(common.config_path,
                            {"posterior_mean", "posterior_sd", "reward_noise", "catalytic_info",
                             "beta", "discount", "seed", "workers"});
    catex::BanditArm arm;
    arm.posterior_mean = pick(mean, file, "posterior_mean", 0.0);
    arm.posterior_sd = pick(sd, file, "posterior_sd", 1.0);
    arm.reward_noise = pick(noise, file, "reward_noise", 1.0);
    arm.catalytic_info = pick(info, file, "catalytic_info", 0.0);
    arm.mean_reward = arm.posterior_mean;
    double b = pick(beta, file, "beta", 1.0);
    double disc = pick(discount, file, "discount", 0.9);
    double standard = catex::standard_gittins_index(arm, disc);
    emit(common, json{{"standard_index", standard},
                      {"modified_index", standard + b * arm.catalytic_info},
                      {"beta", b},
                      {"discount", disc}});
    return 0;
}

int cmd_dynamics_bandit(const CommonFlags& common, std::optional<double> beta,
                        std::optional<double> discount, std::optional<int> horizon) {
    json file = load_config(common.config_path,
                            {"arms", "beta", "discount", "horizon", "seed", "workers", "process"});
    std::vector<catex::BanditArm> arms;
    if (file.contains("arms")) {
        for (const auto& j : file.at("arms")) {
            catex::BanditArm a;
            a.mean_reward = j.value("mean_reward", 0.0);
            a.reward_noise = j.value("reward_noise", 1.0);
            a.catalytic_info = j.value("catalytic_info", 0.0);
            a.posterior_mean = j.value("posterior_mean", a.mean_reward);
            a.posterior_sd = j.value("posterior_sd", 1.0);
            arms.push_back(a);
        }
    } else {
        arms.push_back({1.0, 1.0, 0.0, 0, 1.0, 1.0});
        arms.push_back({-1.0, 1.0, 1.0, 0, -1.0, 1.0});
    }
    std::optional<catex::CatalyticProcess> process;
    if (file.contains("process")) {
        const auto& j = file.at("process");
        process = catex::CatalyticProcess{j.value("quality_gap", 5.0), j.value("sigma0", 10.0),
                                          j.at("benchmark_noise").get<std::vector<double>>()};
    }
    catex::PlayLog log =
        catex::simulate_bandit(std::move(arms), pick(beta, file, "beta", 1.0),
                               pick(discount, file, "discount", 0.9),
                               pick(horizon, file, "horizon", 20), resolve_seed(common, file),
                               process);

    std::ostringstream csv;
    csv << "round,chosen,reward,posterior_mean,posterior_sd,sigma_status_quo,catalytic_credit";
    if (!log.rounds.empty()) {
        for (std::size_t i = 0; i < log.rounds.front().index.size(); ++i) csv << ",index_" << i;
    }
    csv << '\n';
    json rows = json::array();
    for (const auto& r : log.rounds) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g", r.round, r.chosen,
                      r.reward, r.posterior_mean, r.posterior_sd, r.sigma_status_quo,
                      r.catalytic_credit);
        csv << buf;
        for (double ix : r.index) {
            std::snprintf(buf, sizeof buf, ",%.17g", ix);
            csv << buf;
        }
        csv << '\n';
        rows.push_back({{"round", r.round},
                        {"chosen", r.chosen},
                        {"reward", r.reward},
                        {"index", r.index},
                        {"posterior_mean", r.posterior_mean},
                        {"posterior_sd", r.posterior_sd},
                        {"sigma_status_quo", r.sigma_status_quo},
                        {"catalytic_credit", r.catalytic_credit}});
    }
    emit_table(common, csv.str(), json{{"rounds", rows}});
    return 0;
}

// ---------------------------------------------------------------------------
// network
// ---------------------------------------------------------------------------

int cmd_network(const CommonFlags& common, std::optional<int> random_agents,
                std::optional<double> density, std::optional<double> spillover_gain,
                std::optional<double> private_net_flag) {
    json file = load_config(common.config_path,
                            {"weights", "private_net", "spillover_gain", "random_agents",
                             "density", "private_net_value", "seed", "workers"});
    double gain = pick(spillover_gain, file, "spillover_gain", 2.0);

    std::vector<std::vector<double>> weights;
    std::vector<double> net;
    if (file.contains("weights")) {
        weights = file.at("weights").get<std::vector<std::vector<double>>>();
        net = file.at("private_net").get<std::vector<double>>();
    } else {
        int n = pick(random_agents, file, "random_agents", 10);
        if (n < 1) throw ConfigError("random-agents must be >= 1");
        double dens = pick(density, file, "density", 0.4);
        double base_net = pick(private_net_flag, file, "private_net_value", -1.0);
        catex::Substream rs(resolve_seed(common, file), 0);
        weights.assign(n, std::vector<double>(n, 0.0));
        net.assign(n, 0.0);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (i != j && rs.next_uniform() < dens) weights[j][i] = rs.next_uniform();
            }
        }
        for (int i = 0; i < n; ++i) net[i] = base_net + rs.next_uniform();
    }

    catex::NetworkGame game(std::move(weights), std::move(net), gain);
    catex::EquilibriumPair eq = catex::network_equilibria(game);

    std::ostringstream csv;
    csv << "agent,least,greatest\n";
    for (int i = 0; i < game.n_agents; ++i) {
        csv << i << ',' << eq.least[i] << ',' << eq.greatest[i] << '\n';
    }
    emit_table(common, csv.str(),
               json{{"least", eq.least}, {"greatest", eq.greatest},
                    {"multiplicity", eq.multiplicity}});
    return 0;
}

// ---------------------------------------------------------------------------
// cascade
// ---------------------------------------------------------------------------

int cmd_cascade(const CommonFlags& common, const ParamFlags& pf, std::optional<int> agents,
                std::optional<std::string> true_type, std::optional<double> prior_high,
                std::optional<double> accuracy, std::optional<double> theta_low,
                std::optional<double> theta_high, std::optional<double> externality) {
    json file = load_config(common.config_path,
                            with_param_keys({"agents", "true_type", "prior_high", "accuracy",
                                             "theta_low", "theta_high", "externality"}));
    catex::ModelParams p = resolve_params(pf, file);
    catex::CascadeEnv env(p, pick(theta_low, file, "theta_low", 3.0),
                          pick(theta_high, file, "theta_high", 7.0),
                          pick(prior_high, file, "prior_high", 0.5),
                          pick(accuracy, file, "accuracy", 0.75));
    std::string type = pick(true_type, file, "true_type", std::string("low"));
    if (type != "low" && type != "high") throw ConfigError("true-type must be low or high");

    catex::CascadeLog log = catex::run_cascade(
        env, type == "high" ? catex::ChallengerType::high : catex::ChallengerType::low,
        pick(agents, file, "agents", 20), resolve_seed(common, file),
        pick(externality, file, "externality", 0.0));

    std::ostringstream csv;
    csv << "agent,signal_high,public_belief,posterior,explored,in_cascade\n";
    json rows = json::array();
    for (const auto& s : log.steps) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%d,%d\n", s.agent, s.signal_high ? 1 : 0,
                      s.public_belief, s.posterior, s.explored ? 1 : 0, s.in_cascade ? 1 : 0);
        csv << buf;
        rows.push_back({{"agent", s.agent},
                        {"signal_high", s.signal_high},
                        {"public_belief", s.public_belief},
                        {"posterior", s.posterior},
                        {"explored", s.explored},
                        {"in_cascade", s.in_cascade}});
    }
    json doc = {{"steps", rows},
                {"belief_threshold", env.belief_threshold()},
                {"private_expost_loss", log.private_expost_loss},
                {"externality_loss", log.externality_loss}};
    if (log.onset_round) doc["onset_round"] = *log.onset_round;
    emit_table(common, csv.str(), std::move(doc));
    return 0;
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

catex::Moments load_moments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open moments file: " + path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        json j;
        in >> j;
        return catex::Moments(j.at("p_explore").get<double>(), j.at("p_switch").get<double>(),
                              j.value("sigma_theta", 1.0));
    }
    // CSV: header line then one data row
    std::string header, row;
    if (!std::getline(in, header) || !std::getline(in, row)) {
        throw ConfigError("moments CSV must have a header and one data row");
    }
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : s) {
            if (ch == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        out.push_back(cur);
        return out;
    };
    std::vector<std::string> names = split(header);
    std::vector<std::string> vals = split(row);
    if (names.size() != vals.size()) throw ConfigError("moments CSV header/row mismatch");
    double pe = 0, ps = 0, st = 1.0;
    bool have_pe = false, have_ps = false;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == "p_explore") {
            pe = std::stod(vals[i]);
            have_pe = true;
        } else if (names[i] == "p_switch") {
            ps = std::stod(vals[i]);
            have_ps = true;
        } else if (names[i] == "sigma_theta") {
            st = std::stod(vals[i]);
        }
    }
    if (!have_pe || !have_ps) {
        throw ConfigError("moments CSV needs p_explore and p_switch columns");
    }
    return catex::Moments(pe, ps, st);
}

int cmd_estimate(const CommonFlags& common, std::optional<double> p_explore,
                 std::optional<double> p_switch, std::optional<double> sigma_theta,
                 std::optional<double> delta, const std::optional<std::string>& cost_kind,
                 const std::optional<double>& cost_mean, const std::optional<double>& cost_log_mu,
                 const std::optional<double>& cost_log_sigma, const std::string& moments_file,
                 bool main_text_moment, bool total_ov, std::optional<int> bootstrap,
                 std::optional<std::uint64_t> sample_size) {
    json file = load_config(common.config_path,
                            {"p_explore", "p_switch", "sigma_theta", "delta", "cost_dist",
                             "cost_mean", "cost_log_mu", "cost_log_sigma", "moments_file",
                             "main_text_switch_moment", "use_total_option_value", "bootstrap",
                             "sample_size", "seed", "workers"});
    std::string mpath = moments_file;
    if (mpath.empty() && file.contains("moments_file")) mpath = file.at("moments_file");

    catex::Moments m = !mpath.empty()
                           ? load_moments(mpath)
                           : catex::Moments(pick(p_explore, file, "p_explore", 0.5),
                                            pick(p_switch, file, "p_switch", 0.3094),
                                            pick(sigma_theta, file, "sigma_theta", 1.0));
    catex::CostDistribution dist = resolve_cost_dist(cost_kind, cost_mean, cost_log_mu,
                                                     cost_log_sigma, file, 1.0, "exponential");
    catex::EstimationOptions options;
    options.main_text_switch_moment =
        pick(flag_opt(main_text_moment), file, "main_text_switch_moment", false);
    options.use_total_option_value = pick(flag_opt(total_ov), file, "use_total_option_value", false);
    double d = pick(delta, file, "delta", 0.9);

    catex::EstimationResult r = catex::invert_moments(m, dist, d, options);
    json out = {{"sigma_eps_hat", r.sigma_eps_hat},
                {"delta_hat", r.delta_hat},
                {"v_isq_hat", r.v_isq_hat},
                {"convergence",
                 {{"residual_explore", r.convergence.residual_explore},
                  {"residual_switch", r.convergence.residual_switch},
                  {"converged", r.convergence.converged}}}};
    if (!r.convergence.converged) {
        std::cerr << "estimate: moment residuals above tolerance\n" << out.dump(2) << '\n';
        return 3;
    }

    int n_boot = pick(bootstrap, file, "bootstrap", 0);
    if (n_boot > 0) {
        std::vector<catex::Moments> resamples = catex::resample_moments(
            m, pick(sample_size, file, "sample_size", std::uint64_t{10000}), n_boot,
            resolve_seed(common, file));
        catex::BootstrapResult b = catex::bootstrap_se(resamples, dist, d, options);
        out["bootstrap"] = {{"se_sigma_eps", b.se_sigma_eps},
                            {"se_delta", b.se_delta},
                            {"se_v_isq", b.se_v_isq},
                            {"infeasible_rate", b.infeasible_rate},
                            {"flagged", b.flagged}};
    }
    emit(common, std::move(out));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"catalytic-exploration toolkit"};
    app.require_subcommand(1);

    // value
    CommonFlags c_value;
    ParamFlags p_value;
    std::optional<double> gamma, dof;
    bool derivatives = false, asymptote = false;
    CLI::App* value = app.add_subcommand("value", "closed-form option value decomposition");
    add_common(value, c_value);
    add_params(value, p_value);
    value->add_option("--gamma", gamma, "CARA risk aversion; adds cara_v_isq");
    value->add_option("--dof", dof, "Student-t degrees of freedom; adds heavy_tail_v_isq");
    value->add_flag("--derivatives", derivatives, "include dV^ISQ/dsigma and dV^ISQ/dDelta");
    value->add_flag("--asymptote", asymptote, "include the high-uncertainty expansion");

    // sweep
    CommonFlags c_sweep;
    ParamFlags p_sweep;
    std::vector<double> grid;
    std::optional<std::uint64_t> iters;
    std::optional<std::string> sweep_cost_kind;
    std::optional<double> sweep_cost_mean, sweep_cost_log_mu, sweep_cost_log_sigma;
    CLI::App* sweep = app.add_subcommand("sweep", "seeded Monte Carlo sweep over sigma_eps");
    add_common(sweep, c_sweep);
    add_params(sweep, p_sweep);
    sweep->add_option("--grid", grid, "sigma_eps grid values")->delimiter(',');
    sweep->add_option("--iters", iters, "iterations per grid point (default 10000)");
    sweep->add_option("--cost-dist", sweep_cost_kind, "fixed | exponential | lognormal");
    sweep->add_option("--cost-mean", sweep_cost_mean, "mean for exponential costs");
    sweep->add_option("--cost-log-mu", sweep_cost_log_mu, "log-mean for lognormal costs");
    sweep->add_option("--cost-log-sigma", sweep_cost_log_sigma, "log-sd for lognormal costs");

    // signal
    CommonFlags c_signal;
    ParamFlags p_signal;
    std::optional<double> theta_low, theta_high, prior_high, reward, cost_exponent;
    std::optional<double> theta_min, theta_max;
    bool reward_on_exploration = false, continuous = false;
    std::vector<double> sweep_visq;
    CLI::App* signal = app.add_subcommand("signal", "signaling equilibrium solver");
    add_common(signal, c_signal);
    add_params(signal, p_signal);
    signal->add_option("--theta-low", theta_low, "low sender type (default 3)");
    signal->add_option("--theta-high", theta_high, "high sender type (default 7)");
    signal->add_option("--prior-high", prior_high, "prior on the high type (default 0.5)");
    signal->add_option("--reward", reward, "sender reward W (default 10)");
    signal->add_option("--cost-exponent", cost_exponent, "psi(e,theta) = e^k/theta (default k=1)");
    signal->add_flag("--main-text-reward", reward_on_exploration,
                     "sender earns W when explored instead of W*P_s when chosen");
    signal->add_option("--sweep-visq", sweep_visq, "sigma_eps grid; emits regime step data")
        ->delimiter(',');
    signal->add_flag("--continuous", continuous, "continuous-type cutoff solve");
    signal->add_option("--theta-min", theta_min, "continuous support lower end (default 0)");
    signal->add_option("--theta-max", theta_max, "continuous support upper end (default 9)");

    // info
    CommonFlags c_info;
    ParamFlags p_info;
    std::optional<double> kappa_eta, kappa_xi, paradox_externality, cost_mass;
    bool probe = false;
    CLI::App* info = app.add_subcommand("info", "endogenous precision choice");
    add_common(info, c_info);
    add_params(info, p_info);
    info->add_option("--kappa-eta", kappa_eta, "status quo information cost scale (default 0.5)");
    info->add_option("--kappa-xi", kappa_xi, "challenger information cost scale (default 0.5)");
    info->add_flag("--probe", probe, "comparative statics probe instead of the optimum");
    info->add_option("--paradox-externality", paradox_externality,
                     "run the welfare check at this externality");
    info->add_option("--cost-mass", cost_mass, "density of marginal explorers (default 1)");

    // policy
    CommonFlags c_policy;
    ParamFlags p_policy;
    std::optional<double> externality, spillover;
    std::vector<double> policy_sweep;
    std::optional<std::uint64_t> policy_iters;
    std::optional<std::string> policy_cost_kind;
    std::optional<double> policy_cost_mean, policy_cost_log_mu, policy_cost_log_sigma;
    CLI::App* policy = app.add_subcommand("policy", "Pigouvian bundle and welfare accounting");
    add_common(policy, c_policy);
    add_params(policy, p_policy);
    policy->add_option("--externality", externality, "inspection cost E (default 1)");
    policy->add_option("--spillover", spillover, "information spillover S (default 0)");
    policy->add_option("--sweep", policy_sweep, "sigma_eps grid; emits the welfare table")
        ->delimiter(',');
    policy->add_option("--iters", policy_iters, "iterations per grid point (default 10000)");
    policy->add_option("--cost-dist", policy_cost_kind, "fixed | exponential | lognormal");
    policy->add_option("--cost-mean", policy_cost_mean, "mean for exponential costs");
    policy->add_option("--cost-log-mu", policy_cost_log_mu, "log-mean for lognormal costs");
    policy->add_option("--cost-log-sigma", policy_cost_log_sigma, "log-sd for lognormal costs");

    // dynamics
    CLI::App* dynamics = app.add_subcommand("dynamics", "dynamic programming layer");
    dynamics->require_subcommand(1);

    CommonFlags c_thr;
    std::optional<double> thr_gap, thr_cost;
    CLI::App* thr = dynamics->add_subcommand("threshold", "uncertainty level where V^ISQ = c");
    add_common(thr, c_thr);
    thr->add_option("--delta-gap", thr_gap, "quality gap Delta (default 5)");
    thr->add_option("--cost", thr_cost, "exploration cost (default 1)");

    CommonFlags c_dval;
    ParamFlags p_dval;
    std::optional<double> dval_sigma, dval_arrival, dval_rate;
    CLI::App* dval = dynamics->add_subcommand("value", "stationary value at a given sigma");
    add_common(dval, c_dval);
    add_params(dval, p_dval);
    dval->add_option("--sigma", dval_sigma, "uncertainty level (default sigma-eps)");
    dval->add_option("--arrival-rate", dval_arrival, "Poisson arrival rate (default 1)");
    dval->add_option("--discount-rate", dval_rate, "continuous discount rate (default 0.05)");

    CommonFlags c_stop;
    ParamFlags p_stop;
    std::optional<double> stop_sigma0, stop_tau;
    CLI::App* stop = dynamics->add_subcommand("stopping", "posterior-decay stopping trajectory");
    add_common(stop, c_stop);
    add_params(stop, p_stop);
    stop->add_option("--sigma0", stop_sigma0, "initial posterior sd (default sigma-eps)");
    stop->add_option("--tau", stop_tau, "per-observation signal noise (default 10)");

    CommonFlags c_git;
    std::optional<double> git_mean, git_sd, git_noise, git_info, git_beta, git_discount;
    CLI::App* git = dynamics->add_subcommand("gittins", "standard and modified index of one arm");
    add_common(git, c_git);
    git->add_option("--posterior-mean", git_mean, "posterior mean (default 0)");
    git->add_option("--posterior-sd", git_sd, "posterior sd (default 1)");
    git->add_option("--reward-noise", git_noise, "observation noise (default 1)");
    git->add_option("--catalytic-info", git_info, "per-pull V^ISQ resolution (default 0)");
    git->add_option("--beta", git_beta, "shadow price of status quo information (default 1)");
    git->add_option("--discount", git_discount, "per-period discount (default 0.9)");

    CommonFlags c_bandit;
    std::optional<double> bandit_beta, bandit_discount;
    std::optional<int> bandit_horizon;
    CLI::App* bandit = dynamics->add_subcommand("bandit", "greedy index play log");
    add_common(bandit, c_bandit);
    bandit->add_option("--beta", bandit_beta, "shadow price of status quo information (default 1)");
    bandit->add_option("--discount", bandit_discount, "per-period discount (default 0.9)");
    bandit->add_option("--horizon", bandit_horizon, "number of rounds (default 20)");

    // network
    CommonFlags c_network;
    std::optional<int> random_agents;
    std::optional<double> density, spillover_gain, private_net_value;
    CLI::App* network = app.add_subcommand("network", "extremal equilibria of the exploration game");
    add_common(network, c_network);
    network->add_option("--random-agents", random_agents, "seeded random game size (default 10)");
    network->add_option("--density", density, "random link probability (default 0.4)");
    network->add_option("--spillover-gain", spillover_gain, "benchmark value B (default 2)");
    network->add_option("--private-net", private_net_value,
                        "base private net value; agent draws add U(0,1) (default -1)");

    // cascade
    CommonFlags c_cascade;
    ParamFlags p_cascade;
    std::optional<int> cascade_agents;
    std::optional<std::string> cascade_type;
    std::optional<double> cascade_prior, cascade_accuracy, cascade_low, cascade_high,
        cascade_externality;
    CLI::App* cascade = app.add_subcommand("cascade", "sequential exploration cascade log");
    add_common(cascade, c_cascade);
    add_params(cascade, p_cascade);
    cascade->add_option("--agents", cascade_agents, "number of agents (default 20)");
    cascade->add_option("--true-type", cascade_type, "low | high (default low)");
    cascade->add_option("--prior-high", cascade_prior, "prior on the high type (default 0.5)");
    cascade->add_option("--accuracy", cascade_accuracy, "signal accuracy in (0.5,1) (default 0.75)");
    cascade->add_option("--theta-low", cascade_low, "low type value (default 3)");
    cascade->add_option("--theta-high", cascade_high, "high type value (default 7)");
    cascade->add_option("--externality", cascade_externality,
                        "per-exploration inspection cost for the loss tally (default 0)");

    // estimate
    CommonFlags c_est;
    std::optional<double> est_pe, est_ps, est_st, est_delta;
    std::optional<std::string> est_cost_kind;
    std::optional<double> est_cost_mean, est_cost_log_mu, est_cost_log_sigma;
    std::string est_moments_file;
    bool est_main_text = false, est_total_ov = false;
    std::optional<int> est_bootstrap;
    std::optional<std::uint64_t> est_sample_size;
    CLI::App* estimate = app.add_subcommand("estimate", "method-of-moments structural recovery");
    add_common(estimate, c_est);
    estimate->add_option("--p-explore", est_pe, "observed exploration probability");
    estimate->add_option("--p-switch", est_ps, "observed switching probability");
    estimate->add_option("--sigma-theta", est_st, "known challenger dispersion (default 1)");
    estimate->add_option("--delta", est_delta, "discount factor (default 0.9)");
    estimate->add_option("--cost-dist", est_cost_kind, "exponential | lognormal (default exponential)");
    estimate->add_option("--cost-mean", est_cost_mean, "mean for exponential costs (default 1)");
    estimate->add_option("--cost-log-mu", est_cost_log_mu, "log-mean for lognormal costs");
    estimate->add_option("--cost-log-sigma", est_cost_log_sigma, "log-sd for lognormal costs");
    estimate->add_option("--moments-file", est_moments_file, "read moments from CSV or JSON");
    estimate->add_flag("--main-text-switch-moment", est_main_text,
                       "use Phi(-Delta/sigma_eps) for the switch moment");
    estimate->add_flag("--use-total-ov", est_total_ov,
                       "exploration moment uses delta*(V^ISQ + V^IC)");
    estimate->add_option("--bootstrap", est_bootstrap, "number of bootstrap resamples");
    estimate->add_option("--sample-size", est_sample_size,
                         "sample size behind the observed moments (default 10000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (value->parsed()) return cmd_value(c_value, p_value, gamma, dof, derivatives, asymptote);
        if (sweep->parsed()) {
            return cmd_sweep(c_sweep, p_sweep, grid, iters, sweep_cost_kind, sweep_cost_mean,
                             sweep_cost_log_mu, sweep_cost_log_sigma);
        }
        if (signal->parsed()) {
            return cmd_signal(c_signal, p_signal, theta_low, theta_high, prior_high, reward,
                              cost_exponent, reward_on_exploration, sweep_visq, continuous,
                              theta_min, theta_max);
        }
        if (info->parsed()) {
            return cmd_info(c_info, p_info, kappa_eta, kappa_xi, probe, paradox_externality,
                            cost_mass);
        }
        if (policy->parsed()) {
            return cmd_policy(c_policy, p_policy, externality, spillover, policy_sweep,
                              policy_iters, policy_cost_kind, policy_cost_mean, policy_cost_log_mu,
                              policy_cost_log_sigma);
        }
        if (dynamics->parsed()) {
            if (thr->parsed()) return cmd_dynamics_threshold(c_thr, thr_gap, thr_cost);
            if (dval->parsed()) {
                return cmd_dynamics_value(c_dval, p_dval, dval_sigma, dval_arrival, dval_rate);
            }
            if (stop->parsed()) return cmd_dynamics_stopping(c_stop, p_stop, stop_sigma0, stop_tau);
            if (git->parsed()) {
                return cmd_dynamics_gittins(c_git, git_mean, git_sd, git_noise, git_info, git_beta,
                                            git_discount);
            }
            if (bandit->parsed()) {
                return cmd_dynamics_bandit(c_bandit, bandit_beta, bandit_discount, bandit_horizon);
            }
        }
        if (network->parsed()) {
            return cmd_network(c_network, random_agents, density, spillover_gain,
                               private_net_value);
        }
        if (cascade->parsed()) {
            return cmd_cascade(c_cascade, p_cascade, cascade_agents, cascade_type, cascade_prior,
                               cascade_accuracy, cascade_low, cascade_high, cascade_externality);
        }
        if (estimate->parsed()) {
            return cmd_estimate(c_est, est_pe, est_ps, est_st, est_delta, est_cost_kind,
                                est_cost_mean, est_cost_log_mu, est_cost_log_sigma,
                                est_moments_file, est_main_text, est_total_ov, est_bootstrap,
                                est_sample_size);
        }
    } catch (const catex::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
