#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "catex/core_values.hpp"
#include "catex/cost_distribution.hpp"

namespace catex {

struct SimConfig {
    ModelParams params;
    std::uint64_t iterations;
    std::uint64_t seed;
    CostDistribution cost_distribution;
    int workers;

    SimConfig(const ModelParams& params, std::uint64_t iterations, std::uint64_t seed,
              const CostDistribution& cost_distribution, int workers = 1);

    /// Fixed cost taken from params.cost.
    static SimConfig baseline(const ModelParams& params, std::uint64_t iterations,
                              std::uint64_t seed, int workers = 1);
};

/// One grid point of a simulated two-stage decision experiment.
///
/// exploration_rate: share of draws with delta * (V^ISQ + V^IC) >= c under
/// the drawn cost; switching_rate: share with theta > mu0 + eps (the switch
/// event on the drawn pair); mean_realized_ov: mean of max{mu0+eps, theta} -
/// mu0 over exploring draws; catalytic_estimate: mean of max{mu0+eps, mu1} -
/// mu0 over all draws.
struct SimulationReport {
    double sigma_eps;
    double exploration_rate;
    double switching_rate;
    double mean_realized_ov;
    double catalytic_estimate;
    std::map<std::string, double> standard_errors;
    std::uint64_t seed;
};

/// Runs the two-stage experiment at each grid value of sigma_eps.
/// Deterministic in (seed, config) and independent of the worker count:
/// iterations own disjoint substreams and are reduced in fixed block order.
std::vector<SimulationReport> run_sweep(const SimConfig& config, std::span<const double> sigma_grid);

struct McEstimate {
    double value;
    double standard_error;
};

/// Brute-force estimate of V^ISQ: sample mean of max{mu0+eps, mu1} - mu0.
/// Requires iterations >= 10^4.
McEstimate estimate_catalytic_mc(const SimConfig& config);

struct WelfareRow {
    double sigma_eps;
    double deadweight_share;
    double suggested_tax;
};

/// Deadweight share of potential surplus per grid point:
/// (rate * delta * externality) / (mu0 + rate * delta * mean_realized_ov),
/// with the tax from the policy module alongside.
std::vector<WelfareRow> welfare_sweep(const SimConfig& config, double externality,
                                      std::span<const double> sigma_grid);

// ---------------------------------------------------------------------------
// Emission (consumed by the CLI)
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSweepCsvHeader =
    "sigma_eps,exploration_rate,switching_rate,v_isq_closed_form,v_isq_mc,"
    "se_exploration_rate,se_switching_rate,se_v_isq_mc,"
    "v_ic_closed_form,ov_closed_form,cost_threshold,mean_realized_ov";

void write_sweep_csv(std::ostream& os, const SimConfig& config,
                     std::span<const SimulationReport> reports);

void write_welfare_csv(std::ostream& os, std::span<const WelfareRow> rows);

nlohmann::json to_json(const SimulationReport& report);
nlohmann::json sweep_to_json(const SimConfig& config, std::span<const SimulationReport> reports);
nlohmann::json welfare_to_json(std::span<const WelfareRow> rows);

}  // namespace catex
