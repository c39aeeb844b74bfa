#include <benchmark/benchmark.h>

#include "bench_support.hpp"
#include "normnet/centrality.hpp"

using namespace normnet;

static void BM_EigenvectorCentrality(benchmark::State& state) {
  const Snapshot s = bench::pa_graph(static_cast<int>(state.range(0)), 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigenvector_centrality(s));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigenvectorCentrality)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void BM_Gini(benchmark::State& state) {
  const Snapshot s = bench::pa_graph(2048, 8, 1);
  const CentralityVector cv = eigenvector_centrality(s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gini(cv.scores));
  }
}
BENCHMARK(BM_Gini);
