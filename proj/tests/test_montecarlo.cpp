#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "catex/montecarlo.hpp"
#include "catex/rng.hpp"

using namespace catex;

namespace {

const ModelParams kBaseline(10.0, 5.0, 10.0, 1.0, 1.0, 0.9);
const std::vector<double> kGrid = {1.0, 5.0, 10.0, 15.0, 20.0};

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(SimConfig(kBaseline, 0, 1, CostDistribution::fixed(1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(SimConfig(kBaseline, 10, 1, CostDistribution::fixed(1.0), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(CostDistribution::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(CostDistribution::lognormal(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CostDistribution::exponential(1.0).quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(CostDistribution::fixed(1.0).quantile(0.5), std::domain_error);
}

TEST_CASE("identical seed and config give identical reports; workers do not matter") {
    SimConfig one = SimConfig::baseline(kBaseline, 20000, 7, 1);
    SimConfig four = SimConfig::baseline(kBaseline, 20000, 7, 4);
    std::vector<SimulationReport> a = run_sweep(one, kGrid);
    std::vector<SimulationReport> b = run_sweep(one, kGrid);
    std::vector<SimulationReport> c = run_sweep(four, kGrid);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].exploration_rate == b[i].exploration_rate);
        CHECK(a[i].switching_rate == b[i].switching_rate);
        CHECK(a[i].catalytic_estimate == b[i].catalytic_estimate);
        CHECK(a[i].mean_realized_ov == b[i].mean_realized_ov);
        CHECK(a[i].exploration_rate == c[i].exploration_rate);
        CHECK(a[i].switching_rate == c[i].switching_rate);
        CHECK(a[i].catalytic_estimate == c[i].catalytic_estimate);
        CHECK(a[i].mean_realized_ov == c[i].mean_realized_ov);
        CHECK(a[i].standard_errors == c[i].standard_errors);
    }
    // and the CSV emission is byte-identical
    std::ostringstream sa, sc;
    write_sweep_csv(sa, one, a);
    write_sweep_csv(sc, four, c);
    CHECK(sa.str() == sc.str());
}

TEST_CASE("sweep matches the closed forms within sampling error") {
    SimConfig config = SimConfig::baseline(kBaseline, 50000, 42, 1);
    std::vector<SimulationReport> reports = run_sweep(config, kGrid);
    REQUIRE(reports.size() == kGrid.size());
    for (const SimulationReport& r : reports) {
        ModelParams pt = kBaseline.with_sigma_eps(r.sigma_eps);
        double se_v = r.standard_errors.at("v_isq_mc");
        CHECK(std::abs(r.catalytic_estimate - catalytic_value(pt)) < 4.0 * std::max(se_v, 1e-12));
        double sp = switch_probability(pt);
        double se_s = std::max(r.standard_errors.at("switching_rate"), 1e-4);
        CHECK(std::abs(r.switching_rate - sp) < 4.0 * se_s);
        // fixed cost c=1: deterministic all-or-nothing exploration
        double ov = catalytic_value(pt) + switching_value(pt);
        CHECK(r.exploration_rate == (pt.delta * ov >= pt.cost ? 1.0 : 0.0));
    }
    // exploration saturates while switching stays interior
    CHECK(reports.front().exploration_rate == 0.0);
    CHECK(reports.back().exploration_rate == 1.0);
    CHECK(reports.back().switching_rate < 0.45);
    // monotone exploration along the grid
    for (std::size_t i = 1; i < reports.size(); ++i) {
        CHECK(reports[i].exploration_rate >= reports[i - 1].exploration_rate);
    }
}

TEST_CASE("empty grid yields an empty sequence") {
    SimConfig config = SimConfig::baseline(kBaseline, 10000, 1, 1);
    CHECK(run_sweep(config, std::vector<double>{}).empty());
    CHECK(welfare_sweep(config, 1.0, std::vector<double>{}).empty());
}

TEST_CASE("both value components match seeded sampling across the full grid") {
    for (double se : kGrid) {
        ModelParams pt = kBaseline.with_sigma_eps(se);
        double sum_ic = 0.0, sum_ic_sq = 0.0;
        double sum_isq = 0.0, sum_isq_sq = 0.0;
        constexpr std::uint64_t n = 400000;
        for (std::uint64_t i = 0; i < n; ++i) {
            Substream rs(7000 + static_cast<std::uint64_t>(se), i);
            double sq = pt.mu0 + pt.sigma_eps * rs.next_normal();
            double theta = pt.mu1 + pt.sigma_theta * rs.next_normal();
            double ic = std::max(sq, theta) - std::max(sq, pt.mu1);
            double isq = std::max(sq, pt.mu1) - pt.mu0;
            sum_ic += ic;
            sum_ic_sq += ic * ic;
            sum_isq += isq;
            sum_isq_sq += isq * isq;
        }
        auto se_of = [&](double s1, double s2) {
            double mean = s1 / n;
            return std::sqrt(std::max(s2 / n - mean * mean, 0.0) / n);
        };
        CHECK(std::abs(sum_ic / n - switching_value(pt)) <=
              4.0 * std::max(se_of(sum_ic, sum_ic_sq), 1e-9));
        CHECK(std::abs(sum_isq / n - catalytic_value(pt)) <=
              4.0 * std::max(se_of(sum_isq, sum_isq_sq), 1e-9));
    }
}

TEST_CASE("catalytic estimator converges at the root-N rate") {
    ModelParams p = kBaseline;
    CHECK_THROWS_AS(estimate_catalytic_mc(SimConfig::baseline(p, 100, 1)),
                    std::invalid_argument);

    McEstimate e0 = estimate_catalytic_mc(SimConfig::baseline(p.with_sigma_eps(0.0), 10000, 3));
    CHECK(e0.value == 0.0);
    CHECK(e0.standard_error == 0.0);

    // log-log regression of the reported SE on N: slope -0.5 +- 0.05
    std::vector<std::uint64_t> sizes = {10000, 40000, 160000, 640000};
    std::vector<double> lx, ly;
    for (std::uint64_t n : sizes) {
        McEstimate e = estimate_catalytic_mc(SimConfig::baseline(p, n, 11));
        CHECK(std::abs(e.value - 1.97796557401) < 5.0 * e.standard_error);
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(e.standard_error));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    CHECK(num / den == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("cost heterogeneity produces interior exploration rates") {
    SimConfig config(kBaseline, 50000, 5, CostDistribution::exponential(2.0), 1);
    const std::vector<double> single = {10.0};
    std::vector<SimulationReport> reports = run_sweep(config, single);
    double ov = catalytic_value(kBaseline) + switching_value(kBaseline);
    double expected = CostDistribution::exponential(2.0).cdf(0.9 * ov);
    double se = reports[0].standard_errors.at("exploration_rate");
    CHECK(std::abs(reports[0].exploration_rate - expected) < 4.0 * se);
    CHECK(reports[0].exploration_rate > 0.05);
    CHECK(reports[0].exploration_rate < 0.95);
}

TEST_CASE("welfare sweep: zero externality, two-pass accounting, monotone shares") {
    SimConfig config(kBaseline, 40000, 17, CostDistribution::exponential(2.0), 1);

    const std::vector<double> single = {10.0};
    std::vector<WelfareRow> zero = welfare_sweep(config, 0.0, single);
    CHECK(zero[0].deadweight_share == 0.0);
    CHECK(zero[0].suggested_tax == 0.0);

    // per-draw accounting oracle: replay the aggregate formula from the
    // report's own tallies and compare
    std::vector<double> grid = {2.0, 10.0, 20.0};
    std::vector<WelfareRow> rows = welfare_sweep(config, 1.0, grid);
    std::vector<SimulationReport> reports = run_sweep(config, grid);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double n = 40000.0;
        double n_explore = std::round(reports[i].exploration_rate * n);
        double total_dwl = n_explore * kBaseline.delta * 1.0;
        double total_surplus =
            n * kBaseline.mu0 + n_explore * kBaseline.delta * reports[i].mean_realized_ov;
        CHECK(rows[i].deadweight_share ==
              doctest::Approx(total_dwl / total_surplus).epsilon(1e-12));
        CHECK(rows[i].suggested_tax == doctest::Approx(kBaseline.delta * 1.0).epsilon(1e-15));
    }
    CHECK(rows[0].deadweight_share < rows[1].deadweight_share);
    CHECK(rows[1].deadweight_share < rows[2].deadweight_share);
}

TEST_CASE("csv emission carries the frozen header") {
    SimConfig config = SimConfig::baseline(kBaseline, 10000, 42, 1);
    const std::vector<double> single = {10.0};
    std::vector<SimulationReport> reports = run_sweep(config, single);
    std::ostringstream os;
    write_sweep_csv(os, config, reports);
    std::string text = os.str();
    CHECK(text.substr(0, text.find('\n')) == std::string(kSweepCsvHeader));
    // one header plus one row
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);

    nlohmann::json doc = sweep_to_json(config, reports);
    CHECK(doc[0]["v_isq_closed_form"].get<double>() ==
          doctest::Approx(1.97796557401).epsilon(1e-10));
    CHECK(doc[0]["seed"].get<std::uint64_t>() == 42);
}
