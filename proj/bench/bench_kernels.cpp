// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "hamlaw/counting.hpp"
#include "hamlaw/sampling.hpp"
#include "hamlaw/structures.hpp"
#include "hamlaw/theory.hpp"
#include "hamlaw/ystat.hpp"

using namespace hamlaw;

namespace {

Hypergraph graph_at(unsigned n, unsigned r, unsigned ell, double c) {
    return sample_gnp(Params::from_c(n, r, ell, c), Seed{42, 0});
}

void BM_CountBacktracking(benchmark::State& state) {
    const Hypergraph g = graph_at(static_cast<unsigned>(state.range(0)), 3, 2, 1.5);
    CountOptions co;
    co.method = CountMethod::Backtracking;
    co.parallel = state.range(1) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(count_hamilton(g, 2, co).count);
}
BENCHMARK(BM_CountBacktracking)->ArgsProduct({{16, 20}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_CountSubsetDp(benchmark::State& state) {
    const Hypergraph g = graph_at(static_cast<unsigned>(state.range(0)), 3, 2, 3.0);
    CountOptions co;
    co.method = CountMethod::SubsetDp;
    co.parallel = state.range(1) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(count_hamilton(g, 2, co).count);
}
BENCHMARK(BM_CountSubsetDp)->ArgsProduct({{14, 16}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_AutBruteforce(benchmark::State& state) {
    const EdgePattern pat = pattern_of(build_cycle(static_cast<unsigned>(state.range(0)), 3, 2));
    const bool parallel = state.range(1) != 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(parallel ? aut_bruteforce(pat) : aut_bruteforce_serial(pat));
    }
}
BENCHMARK(BM_AutBruteforce)->ArgsProduct({{10, 14}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_YStatistics(benchmark::State& state) {
    const unsigned n = static_cast<unsigned>(state.range(0));
    const Params params = Params::from_c(n, 3, 2, 1.0);
    const Hypergraph g = sample_gnp(params, Seed{42, 1});
    YOptions yo;
    yo.parallel = state.range(1) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(y_statistics(g, 2, params.p, 4, yo));
}
BENCHMARK(BM_YStatistics)->ArgsProduct({{20, 40}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
