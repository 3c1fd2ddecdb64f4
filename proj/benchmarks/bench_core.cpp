#include <benchmark/benchmark.h>

#include "smcensus/counting_lens.hpp"
#include "smcensus/matchings.hpp"
#include "smcensus/poset.hpp"
#include "smcensus/rotations.hpp"
#include "smcensus/tangled_grid.hpp"

using namespace smcensus;

static void BM_CountDownsetsDiamond(benchmark::State& state) {
    const auto grid = grid_diamond(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(count_downsets(grid.poset, 64));
}
BENCHMARK(BM_CountDownsetsDiamond)->DenseRange(3, 8);

static void BM_CountDownsetsRandomGrid(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto grid = random_tangled_grid(n, 7);
    for (auto _ : state) benchmark::DoNotOptimize(count_downsets(grid.poset, 64));
}
BENCHMARK(BM_CountDownsetsRandomGrid)->DenseRange(3, 7);

static void BM_BruteForce(benchmark::State& state) {
    const auto p = random_instance(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_stable_bruteforce(p));
}
BENCHMARK(BM_BruteForce)->DenseRange(5, 9, 2);

static void BM_BuildRotationPoset(benchmark::State& state) {
    const auto p = random_instance(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(build_rotation_poset(p));
}
BENCHMARK(BM_BuildRotationPoset)->RangeMultiplier(2)->Range(4, 32);

static void BM_ViaRotations(benchmark::State& state) {
    const auto p = random_instance(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_stable_via_rotations(p));
}
BENCHMARK(BM_ViaRotations)->DenseRange(5, 9, 2);

static void BM_BoundDownsetFamily(benchmark::State& state) {
    const auto family = downsets_family(random_tangled_grid(static_cast<int>(state.range(0)), 5));
    for (auto _ : state)
        benchmark::DoNotOptimize(bound(family, {BoundVariant::max_s_expect_pi_log, PermutationDistribution::uniform()}));
    state.counters["members"] = static_cast<double>(family.size());
}
BENCHMARK(BM_BoundDownsetFamily)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_BoundMonteCarlo(benchmark::State& state) {
    const auto family = example1_family(50);
    const auto samples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(bound(family, {BoundVariant::expect_both, PermutationDistribution::monte_carlo(samples)}, 1));
}
BENCHMARK(BM_BoundMonteCarlo)->Arg(1000)->Arg(10000);
