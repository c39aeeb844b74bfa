#include <benchmark/benchmark.h>

#include <random>

#include "normnet/rng.hpp"
#include "normnet/semantics.hpp"

using namespace normnet;

namespace {

std::vector<TokenDistribution> synthetic_documents(int docs, int vocab, int words_per_doc,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TokenDistribution> out(docs);
  for (int d = 0; d < docs; ++d) {
    out[d].page = d;
    for (int w = 0; w < words_per_doc; ++w) {
      const auto word = "w" + std::to_string(uniform_index(rng, vocab));
      ++out[d].counts[word];
      ++out[d].total;
    }
  }
  return out;
}

}  // namespace

static void BM_LdaSweeps(benchmark::State& state) {
  const auto docs = synthetic_documents(200, 800, 300, 3);
  LdaOptions opt;
  opt.topics = 20;
  opt.seed = 1;
  opt.sweeps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_lda(docs, opt));
  }
}
BENCHMARK(BM_LdaSweeps)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_Jsd(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<double> a(20), b(20);
  double ta = 0.0, tb = 0.0;
  for (int i = 0; i < 20; ++i) {
    a[i] = uniform_unit(rng);
    b[i] = uniform_unit(rng);
    ta += a[i];
    tb += b[i];
  }
  for (double& v : a) v /= ta;
  for (double& v : b) v /= tb;
  for (auto _ : state) {
    benchmark::DoNotOptimize(jsd(a, b));
  }
}
BENCHMARK(BM_Jsd);
