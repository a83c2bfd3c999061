#include <benchmark/benchmark.h>

#include <cmath>

#include "nbp/distributions.hpp"
#include "nbp/rng.hpp"
#include "nbp/stirling.hpp"

namespace {

void BM_StirlingTableBuild(benchmark::State& state) {
  const auto max_m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    nbp::StirlingTable table(max_m);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_StirlingTableBuild)->Arg(100)->Arg(1000);

void BM_SampleCrt(benchmark::State& state) {
  nbp::RngStream rng(1);
  const auto m = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(nbp::sample_crt(m, 2.0, rng));
}
BENCHMARK(BM_SampleCrt)->Arg(10)->Arg(100)->Arg(1000);

void BM_SampleNb(benchmark::State& state) {
  nbp::RngStream rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(nbp::sample_nb(3.0, 0.4, rng));
}
BENCHMARK(BM_SampleNb);

void BM_SamplePoissonSmall(benchmark::State& state) {
  nbp::RngStream rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(nbp::sample_poisson(3.0, rng));
}
BENCHMARK(BM_SamplePoissonSmall);

void BM_SamplePoissonLarge(benchmark::State& state) {
  nbp::RngStream rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(nbp::sample_poisson(5000.0, rng));
}
BENCHMARK(BM_SamplePoissonLarge);

void BM_SampleGammaSmallShape(benchmark::State& state) {
  nbp::RngStream rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(nbp::sample_gamma(0.05, 1.0, rng));
}
BENCHMARK(BM_SampleGammaSmallShape);

void BM_SampleLogCached(benchmark::State& state) {
  nbp::RngStream rng(1);
  nbp::LogSampler sampler(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(sampler(rng));
}
BENCHMARK(BM_SampleLogCached);

void BM_CrtLogPmf(benchmark::State& state) {
  const nbp::StirlingTable table(200);
  std::int64_t l = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nbp::crt_log_pmf(l % 150, 150, 2.5, table));
    ++l;
  }
}
BENCHMARK(BM_CrtLogPmf);

}  // namespace

BENCHMARK_MAIN();
