#include <benchmark/benchmark.h>

#include "bench_support.hpp"
#include "normnet/community.hpp"

using namespace normnet;

static void BM_Louvain(benchmark::State& state) {
  const Snapshot s = bench::pa_graph(static_cast<int>(state.range(0)), 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(louvain(s, 0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Louvain)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

static void BM_LocalClustering(benchmark::State& state) {
  const Snapshot s = bench::pa_graph(2048, 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_clustering(s));
  }
}
BENCHMARK(BM_LocalClustering);
