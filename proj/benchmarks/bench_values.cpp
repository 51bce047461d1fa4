#include <benchmark/benchmark.h>

#include "catex/core_values.hpp"
#include "catex/info_design.hpp"
#include "catex/math.hpp"

namespace {

const catex::ModelParams kBaseline(10.0, 5.0, 10.0, 1.0, 1.0, 0.9);

void BM_CatalyticValue(benchmark::State& state) {
    double sigma = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(catex::one_sided_option_value(5.0, sigma));
        sigma += 1e-9;
    }
}
BENCHMARK(BM_CatalyticValue);

void BM_Decompose(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(catex::decompose_option_value(kBaseline));
    }
}
BENCHMARK(BM_Decompose);

void BM_NormQuantile(benchmark::State& state) {
    double p = 1e-6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(catex::norm_quantile(p));
        p += 1e-9;
    }
}
BENCHMARK(BM_NormQuantile);

void BM_HeavyTailQuadrature(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(catex::heavy_tail_catalytic_value(kBaseline, 5.0));
    }
}
BENCHMARK(BM_HeavyTailQuadrature);

void BM_OptimizePrecision(benchmark::State& state) {
    catex::ModelParams p(10.0, 5.0, 10.0, 1.0, 0.0, 0.9);
    catex::InfoCosts costs(0.5, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(catex::optimize_precision(p, costs));
    }
}
BENCHMARK(BM_OptimizePrecision);

}  // namespace
