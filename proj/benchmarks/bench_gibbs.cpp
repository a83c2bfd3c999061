#include <benchmark/benchmark.h>

#include "nbp/eval.hpp"
#include "nbp/gibbs.hpp"
#include "nbp/measures.hpp"

namespace {

using namespace nbp;

SyntheticCorpus bench_corpus(std::int32_t V, std::int32_t J) {
  ModelSpec spec;
  spec.variant = Variant::kGammaNb;
  spec.hp.K = 10;
  spec.hp.a0 = 8.0;
  spec.hp.b0 = 4.0;
  spec.hp.e0 = 500.0;
  spec.hp.f0 = 10.0;
  spec.hp.eta = 0.1;
  RngStream rng(5);
  return simulate_corpus(spec, V, J, 5, rng);
}

// one full gamma-NB sweep; counts() reports token throughput
void BM_GammaNbSweep(benchmark::State& state) {
  const auto corpus = bench_corpus(200, static_cast<std::int32_t>(state.range(0)));
  ModelSpec spec;
  spec.variant = Variant::kGammaNb;
  spec.hp.K = static_cast<std::int32_t>(state.range(1));
  RngStream rng(9);
  ModelState s = init_schedule(corpus.counts, spec, 5, rng);
  for (auto _ : state) sweep_variant(s, spec, rng);
  state.SetItemsProcessed(state.iterations() * s.num_tokens());
}
BENCHMARK(BM_GammaNbSweep)->Args({100, 50})->Args({100, 400})->Args({500, 100});

void BM_MarkedBetaNbSweep(benchmark::State& state) {
  const auto corpus = bench_corpus(200, 100);
  ModelSpec spec;
  spec.variant = Variant::kMarkedBetaNb;
  spec.hp.K = 100;
  RngStream rng(9);
  ModelState s = init_schedule(corpus.counts, spec, 5, rng);
  for (auto _ : state) sweep_variant(s, spec, rng);
  state.SetItemsProcessed(state.iterations() * s.num_tokens());
}
BENCHMARK(BM_MarkedBetaNbSweep);

void BM_PredictiveAccumulate(benchmark::State& state) {
  const auto corpus = bench_corpus(200, 100);
  ModelSpec spec;
  spec.variant = Variant::kGammaNb;
  spec.hp.K = 100;
  RngStream rng(9);
  ModelState s = init_schedule(corpus.counts, spec, 5, rng);
  PredictiveAccumulator acc(s.J, s.V);
  for (auto _ : state) acc.accumulate(s);
}
BENCHMARK(BM_PredictiveAccumulate);

}  // namespace

BENCHMARK_MAIN();
