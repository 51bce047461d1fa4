#include <benchmark/benchmark.h>

#include "catex/dynamics.hpp"
#include "catex/montecarlo.hpp"
#include "catex/rng.hpp"

namespace {

const catex::ModelParams kBaseline(10.0, 5.0, 10.0, 1.0, 1.0, 0.9);

void BM_SubstreamNormal(benchmark::State& state) {
    std::uint64_t i = 0;
    for (auto _ : state) {
        catex::Substream rs(42, i++);
        benchmark::DoNotOptimize(rs.next_normal());
    }
}
BENCHMARK(BM_SubstreamNormal);

void BM_CatalyticEstimate(benchmark::State& state) {
    auto n = static_cast<std::uint64_t>(state.range(0));
    catex::SimConfig config = catex::SimConfig::baseline(kBaseline, n, 42, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(catex::estimate_catalytic_mc(config));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_CatalyticEstimate)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_SweepPoint(benchmark::State& state) {
    catex::SimConfig config = catex::SimConfig::baseline(kBaseline, 10000, 42, 1);
    const std::vector<double> grid = {10.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(catex::run_sweep(config, grid));
    }
}
BENCHMARK(BM_SweepPoint);

void BM_GittinsIndex(benchmark::State& state) {
    catex::BanditArm arm{0.0, 1.0, 0.0, 0, 0.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(catex::standard_gittins_index(arm, 0.9));
    }
}
BENCHMARK(BM_GittinsIndex);

}  // namespace

BENCHMARK_MAIN();
