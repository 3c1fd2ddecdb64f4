#include <benchmark/benchmark.h>

#include "smcensus/bounds.hpp"
#include "smcensus/distributions.hpp"

using namespace smcensus;

static void BM_SeriesTg(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(series_tg_constant(state.range(0)));
}
BENCHMARK(BM_SeriesTg)->RangeMultiplier(10)->Range(10'000, 1'000'000)->Unit(benchmark::kMillisecond);

static void BM_SeriesSm(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(series_sm_constant(state.range(0)));
}
BENCHMARK(BM_SeriesSm)->RangeMultiplier(10)->Range(10'000, 1'000'000)->Unit(benchmark::kMillisecond);

static void BM_FiniteNScan(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(finite_n_tg_scan(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FiniteNScan)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_NlPmf(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(nl_pmf(n, n / 2));
}
BENCHMARK(BM_NlPmf)->Arg(30)->Arg(300);

static void BM_SampleNl(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sample_nl(100, 30, 10'000, 1));
    state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_SampleNl);

static void BM_SampleNx(benchmark::State& state) {
    const double x = static_cast<double>(state.range(0)) / 10;
    for (auto _ : state) benchmark::DoNotOptimize(sample_nx(x, NxVariant::section4, 10'000, 1));
    state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_SampleNx)->Arg(1)->Arg(5)->Arg(9);

static void BM_DominanceDiamond(benchmark::State& state) {
    const auto grid = grid_diamond(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dominance_check(grid));
}
BENCHMARK(BM_DominanceDiamond)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
