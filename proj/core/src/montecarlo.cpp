#include "catex/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "catex/math.hpp"
#include "catex/rng.hpp"
#include "catex/welfare_policy.hpp"

namespace catex {

namespace {

constexpr std::uint64_t kBlockSize = 4096;

/// Per-block partial sums. Blocks are a fixed partition of the iteration
/// range, so the reduction tree does not depend on the worker count.
struct BlockStats {
    std::uint64_t n = 0;
    std::uint64_t n_explore = 0;
    std::uint64_t n_switch = 0;
    double sum_realized = 0.0;    // over exploring draws
    double sum_realized_sq = 0.0;
    double sum_cat = 0.0;
    double sum_cat_sq = 0.0;
};

struct GridPointTotals {
    std::uint64_t n = 0;
    std::uint64_t n_explore = 0;
    std::uint64_t n_switch = 0;
    double sum_realized = 0.0;
    double sum_realized_sq = 0.0;
    double sum_cat = 0.0;
    double sum_cat_sq = 0.0;
};

BlockStats simulate_block(const SimConfig& config, const ModelParams& pt, double total_ov,
                          std::uint64_t stream_base, std::uint64_t first, std::uint64_t last) {
    BlockStats st;
    for (std::uint64_t i = first; i < last; ++i) {
        Substream rs(config.seed, stream_base + i);
        double eps = pt.sigma_eps * rs.next_normal();
        double theta = pt.mu1 + pt.sigma_theta * rs.next_normal();
        double c = config.cost_distribution.sample(rs);

        bool explored = pt.delta * total_ov >= c;
        double sq = pt.mu0 + eps;
        double realized = std::max(sq, theta) - pt.mu0;
        double cat = std::max(sq, pt.mu1) - pt.mu0;

        ++st.n;
        if (explored) {
            ++st.n_explore;
            st.sum_realized += realized;
            st.sum_realized_sq += realized * realized;
        }
        if (theta > sq) ++st.n_switch;
        st.sum_cat += cat;
        st.sum_cat_sq += cat * cat;
    }
    return st;
}

GridPointTotals run_grid_point(const SimConfig& config, const ModelParams& pt,
                               std::uint64_t stream_base) {
    double total_ov = catalytic_value(pt) + switching_value(pt);
    std::uint64_t n_blocks = (config.iterations + kBlockSize - 1) / kBlockSize;
    std::vector<BlockStats> blocks(n_blocks);

    auto run_block = [&](std::uint64_t b) {
        std::uint64_t first = b * kBlockSize;
        std::uint64_t last = std::min(first + kBlockSize, config.iterations);
        blocks[b] = simulate_block(config, pt, total_ov, stream_base, first, last);
    };

    int workers = config.workers;
    if (workers <= 1 || n_blocks <= 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (std::uint64_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
                run_block(b);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Ordered reduction over block index: identical for any worker count.
    GridPointTotals tot;
    for (const BlockStats& b : blocks) {
        tot.n += b.n;
        tot.n_explore += b.n_explore;
        tot.n_switch += b.n_switch;
        tot.sum_realized += b.sum_realized;
        tot.sum_realized_sq += b.sum_realized_sq;
        tot.sum_cat += b.sum_cat;
        tot.sum_cat_sq += b.sum_cat_sq;
    }
    return tot;
}

double binomial_se(double p, double n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n); }

double mean_se(double sum, double sum_sq, double n) {
    if (n < 2.0) return 0.0;
    double mean = sum / n;
    double var = std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1.0);
    return std::sqrt(var / n);
}

}  // namespace

SimConfig::SimConfig(const ModelParams& params_, std::uint64_t iterations_, std::uint64_t seed_,
                     const CostDistribution& cost_distribution_, int workers_)
    : params(params_), iterations(iterations_), seed(seed_),
      cost_distribution(cost_distribution_), workers(workers_) {
    if (iterations == 0) throw std::invalid_argument("SimConfig: iterations must be >= 1");
    if (workers < 1) throw std::invalid_argument("SimConfig: workers must be >= 1");
}

SimConfig SimConfig::baseline(const ModelParams& params, std::uint64_t iterations,
                              std::uint64_t seed, int workers) {
    return SimConfig(params, iterations, seed, CostDistribution::fixed(params.cost), workers);
}

std::vector<SimulationReport> run_sweep(const SimConfig& config,
                                        std::span<const double> sigma_grid) {
    std::vector<SimulationReport> out;
    out.reserve(sigma_grid.size());
    for (std::size_t g = 0; g < sigma_grid.size(); ++g) {
        if (sigma_grid[g] < 0.0) throw std::invalid_argument("run_sweep: grid values must be >= 0");
        ModelParams pt = config.params.with_sigma_eps(sigma_grid[g]);
        GridPointTotals t = run_grid_point(config, pt, g * config.iterations);

        double n = static_cast<double>(t.n);
        SimulationReport rep;
        rep.sigma_eps = sigma_grid[g];
        rep.exploration_rate = static_cast<double>(t.n_explore) / n;
        rep.switching_rate = static_cast<double>(t.n_switch) / n;
        rep.mean_realized_ov =
            t.n_explore > 0 ? t.sum_realized / static_cast<double>(t.n_explore) : 0.0;
        rep.catalytic_estimate = t.sum_cat / n;
        rep.seed = config.seed;
        rep.standard_errors = {
            {"exploration_rate", binomial_se(rep.exploration_rate, n)},
            {"switching_rate", binomial_se(rep.switching_rate, n)},
            {"v_isq_mc", mean_se(t.sum_cat, t.sum_cat_sq, n)},
            {"mean_realized_ov",
             mean_se(t.sum_realized, t.sum_realized_sq, static_cast<double>(t.n_explore))},
        };
        out.push_back(std::move(rep));
    }
    return out;
}

McEstimate estimate_catalytic_mc(const SimConfig& config) {
    if (config.iterations < 10000) {
        throw std::invalid_argument("estimate_catalytic_mc: iterations must be >= 10^4");
    }
    GridPointTotals t = run_grid_point(config, config.params, 0);
    double n = static_cast<double>(t.n);
    return {t.sum_cat / n, mean_se(t.sum_cat, t.sum_cat_sq, n)};
}

std::vector<WelfareRow> welfare_sweep(const SimConfig& config, double externality,
                                      std::span<const double> sigma_grid) {
    if (externality < 0.0) throw std::invalid_argument("welfare_sweep: externality must be >= 0");
    std::vector<SimulationReport> reports = run_sweep(config, sigma_grid);
    std::vector<WelfareRow> rows;
    rows.reserve(reports.size());
    for (const SimulationReport& r : reports) {
        ModelParams pt = config.params.with_sigma_eps(r.sigma_eps);
        double num = r.exploration_rate * pt.delta * externality;
        double den = pt.mu0 + r.exploration_rate * pt.delta * r.mean_realized_ov;
        PolicyBundle bundle = optimal_policy(pt, ExternalityEnv(externality, 0.0));
        rows.push_back({r.sigma_eps, num / den, bundle.exploration_tax});
    }
    return rows;
}

namespace {

void csv_value(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SimConfig& config,
                     std::span<const SimulationReport> reports) {
    os << kSweepCsvHeader << '\n';
    for (const SimulationReport& r : reports) {
        ModelParams pt = config.params.with_sigma_eps(r.sigma_eps);
        double v_isq = catalytic_value(pt);
        double v_ic = switching_value(pt);
        const double cols[] = {
            r.sigma_eps,
            r.exploration_rate,
            r.switching_rate,
            v_isq,
            r.catalytic_estimate,
            r.standard_errors.at("exploration_rate"),
            r.standard_errors.at("switching_rate"),
            r.standard_errors.at("v_isq_mc"),
            v_ic,
            v_isq + v_ic,
            pt.cost / pt.delta,
            r.mean_realized_ov,
        };
        for (std::size_t i = 0; i < std::size(cols); ++i) {
            if (i) os << ',';
            csv_value(os, cols[i]);
        }
        os << '\n';
    }
}

void write_welfare_csv(std::ostream& os, std::span<const WelfareRow> rows) {
    os << "sigma_eps,deadweight_share,suggested_tax\n";
    for (const WelfareRow& r : rows) {
        csv_value(os, r.sigma_eps);
        os << ',';
        csv_value(os, r.deadweight_share);
        os << ',';
        csv_value(os, r.suggested_tax);
        os << '\n';
    }
}

nlohmann::json to_json(const SimulationReport& r) {
    return {
        {"sigma_eps", r.sigma_eps},
        {"exploration_rate", r.exploration_rate},
        {"switching_rate", r.switching_rate},
        {"mean_realized_ov", r.mean_realized_ov},
        {"v_isq_mc", r.catalytic_estimate},
        {"standard_errors", r.standard_errors},
        {"seed", r.seed},
    };
}

nlohmann::json sweep_to_json(const SimConfig& config, std::span<const SimulationReport> reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SimulationReport& r : reports) {
        ModelParams pt = config.params.with_sigma_eps(r.sigma_eps);
        nlohmann::json row = to_json(r);
        row["v_isq_closed_form"] = catalytic_value(pt);
        row["v_ic_closed_form"] = switching_value(pt);
        row["ov_closed_form"] = catalytic_value(pt) + switching_value(pt);
        row["cost_threshold"] = pt.cost / pt.delta;
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json welfare_to_json(std::span<const WelfareRow> rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const WelfareRow& r : rows) {
        arr.push_back({{"sigma_eps", r.sigma_eps},
                       {"deadweight_share", r.deadweight_share},
                       {"suggested_tax", r.suggested_tax}});
    }
    return arr;
}

}  // namespace catex
