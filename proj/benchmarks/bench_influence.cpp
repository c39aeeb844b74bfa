#include <benchmark/benchmark.h>

#include "bench_support.hpp"
#include "normnet/influence.hpp"

using namespace normnet;

static void BM_InfluenceVector(benchmark::State& state) {
  const Snapshot s = bench::pa_graph(2048, 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(influence(s, 0, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_InfluenceVector)->Arg(5)->Arg(20);

static void BM_MeanPairwiseOverlap20(benchmark::State& state) {
  const Snapshot s = bench::pa_graph(2048, 8, 1);
  std::vector<PageId> core;
  for (int i = 0; i < 20; ++i) core.push_back(i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_pairwise_overlap(s, core, 5));
  }
}
BENCHMARK(BM_MeanPairwiseOverlap20);
