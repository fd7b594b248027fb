#include <benchmark/benchmark.h>

#include "dynlis/core.hpp"
#include "dynlis/cover.hpp"
#include "dynlis/decremental.hpp"
#include "dynlis/dynamic.hpp"
#include "dynlis/rng.hpp"

using namespace dynlis;

static void BM_LisStatic(benchmark::State& state) {
    Rng rng(1);
    auto ps = normalize(rng.permutation(size_t(state.range(0))));
    for (auto _ : state) {
        auto r = lis_static(ps);
        benchmark::DoNotOptimize(r.length);
    }
}
BENCHMARK(BM_LisStatic)->Range(1 << 10, 1 << 16);

static void BM_CoverExact(benchmark::State& state) {
    Rng rng(2);
    auto ps = normalize(rng.permutation(size_t(state.range(0))));
    for (auto _ : state) {
        auto segs = cover_exact(ps, 8);
        benchmark::DoNotOptimize(segs.size());
    }
}
BENCHMARK(BM_CoverExact)->Range(1 << 10, 1 << 14);

static void BM_DecrementalDeleteAll(benchmark::State& state) {
    const size_t n = size_t(state.range(0));
    for (auto _ : state) {
        state.PauseTiming();
        Rng rng(3);
        DecrementalLis dec(normalize(rng.permutation(n)), 0.5);
        state.ResumeTiming();
        while (dec.live() > 0) dec.erase(rng.range(0, dec.live() - 1));
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(n));
}
BENCHMARK(BM_DecrementalDeleteAll)->Range(1 << 8, 1 << 12)->Unit(benchmark::kMillisecond);

static void BM_DynamicMixedOps(benchmark::State& state) {
    const int64_t n = state.range(0);
    Rng rng(4);
    DynamicLis dyn(rng.permutation(size_t(n)), 0.5);
    int64_t size = n;
    for (auto _ : state) {
        if (size == 0 || rng.below(2) == 0) {
            dyn.insert(rng.range(0, size), rng.range(0, 4 * n));
            ++size;
        } else {
            dyn.erase(rng.range(0, size - 1));
            --size;
        }
    }
    state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_DynamicMixedOps)->Range(1 << 8, 1 << 14)->Unit(benchmark::kMicrosecond);

static void BM_DynamicQuery(benchmark::State& state) {
    const int64_t n = state.range(0);
    Rng rng(5);
    DynamicLis dyn(rng.permutation(size_t(n)), 0.5);
    for (auto _ : state) {
        int64_t i = rng.range(0, n - 1);
        int64_t j = rng.range(i, n - 1);
        benchmark::DoNotOptimize(dyn.query(i, j));
    }
}
BENCHMARK(BM_DynamicQuery)->Range(1 << 8, 1 << 14);

BENCHMARK_MAIN();
