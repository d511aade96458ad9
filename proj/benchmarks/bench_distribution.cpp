#include <benchmark/benchmark.h>

#include "ntle/distribution.hpp"

namespace {

const ntle::NtleParams kParams(1.0, 1.5, 0.5);

void BM_Pdf(benchmark::State& state) {
  double y = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ntle::pdf(kParams, y));
    y = y < 5.0 ? y + 0.01 : 0.01;
  }
}
BENCHMARK(BM_Pdf);

void BM_Cdf(benchmark::State& state) {
  double y = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ntle::cdf(kParams, y));
    y = y < 5.0 ? y + 0.01 : 0.01;
  }
}
BENCHMARK(BM_Cdf);

void BM_Quantile(benchmark::State& state) {
  double p = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ntle::quantile(kParams, p));
    p = p < 0.998 ? p + 0.001 : 0.001;
  }
}
BENCHMARK(BM_Quantile);

void BM_Sample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ntle::sample(kParams, n, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sample)->Arg(1000)->Arg(100000);

}  // namespace
