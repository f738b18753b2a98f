#include <benchmark/benchmark.h>

#include "bsdeploy/coverage.hpp"
#include "bsdeploy/distdist.hpp"
#include "bsdeploy/geometry.hpp"
#include "bsdeploy/search.hpp"
#include "bsdeploy/sim.hpp"

using namespace bsdeploy;

namespace {

constexpr double kR = 500.0;

void bm_table_layout(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(table1_layout(n, kR));
}
BENCHMARK(bm_table_layout)->Arg(4)->Arg(19)->Arg(35);

void bm_bruteforce_layout(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(minimax_layout_bruteforce(n, kR));
}
BENCHMARK(bm_bruteforce_layout)->Arg(19)->Arg(35)->Unit(benchmark::kMillisecond);

void bm_cell_distribution(benchmark::State& state) {
    const auto cells = build_cells(table1_layout(static_cast<int>(state.range(0)), kR), kR);
    for (auto _ : state) benchmark::DoNotOptimize(CellDistanceDistribution(cells.back()));
}
BENCHMARK(bm_cell_distribution)->Arg(4)->Arg(21)->Arg(35)->Unit(benchmark::kMillisecond);

void bm_coverage(benchmark::State& state) {
    const FieldSpec field = FieldSpec::circular(kR, 120);
    const auto dists = layout_distributions(table1_layout(21, kR), field, DensityMode::Moderate);
    const ChannelParams ch;
    for (auto _ : state) benchmark::DoNotOptimize(coverage_far(dists.back(), ch, 2.0));
}
BENCHMARK(bm_coverage)->Unit(benchmark::kMicrosecond);

void bm_cost_function_cold(benchmark::State& state) {
    const ChannelParams ch;
    const CostModel cm;
    const OptimizationLimits lim;
    for (auto _ : state) {
        const DeploymentModel model(FieldSpec::circular(kR, 120), DensityMode::Moderate);
        benchmark::DoNotOptimize(cost_function(static_cast<int>(state.range(0)), model, ch, cm, lim));
    }
}
BENCHMARK(bm_cost_function_cold)->Arg(7)->Arg(26)->Unit(benchmark::kMillisecond);

void bm_cost_function_warm(benchmark::State& state) {
    const ChannelParams ch;
    const CostModel cm;
    const OptimizationLimits lim;
    const DeploymentModel model(FieldSpec::circular(kR, 120), DensityMode::Moderate);
    const int n = static_cast<int>(state.range(0));
    cost_function(n, model, ch, cm, lim);
    for (auto _ : state) benchmark::DoNotOptimize(cost_function(n, model, ch, cm, lim));
}
BENCHMARK(bm_cost_function_warm)->Arg(7)->Arg(26)->Unit(benchmark::kMicrosecond);

void bm_golden_section(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(golden_section([](int n) { return (n - 17.0) * (n - 17.0); }, 1, 35, 2));
    }
}
BENCHMARK(bm_golden_section)->Unit(benchmark::kMicrosecond);

void bm_optimize_deployment(benchmark::State& state) {
    const ChannelParams ch;
    const CostModel cm;
    const OptimizationLimits lim;
    for (auto _ : state) {
        const DeploymentModel model(FieldSpec::circular(kR, 120), DensityMode::Moderate);
        benchmark::DoNotOptimize(optimize_deployment(model, ch, cm, lim));
    }
}
BENCHMARK(bm_optimize_deployment)->Unit(benchmark::kMillisecond);

void bm_mc_farthest(benchmark::State& state) {
    const auto cells = build_cells(table1_layout(4, kR), kR);
    const FieldSpec field = FieldSpec::circular(kR, 120);
    McConfig mc{1000, 1, 1, 1};
    for (auto _ : state) benchmark::DoNotOptimize(mc_farthest_distances(cells[0], field, mc));
}
BENCHMARK(bm_mc_farthest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
