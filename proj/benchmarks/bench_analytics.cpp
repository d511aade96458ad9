#include <benchmark/benchmark.h>

#include "ntle/analytics.hpp"

namespace {

const ntle::NtleParams kParams(1.0, 1.5, 0.5);

void BM_ShannonEntropy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ntle::shannon_entropy(kParams));
}
BENCHMARK(BM_ShannonEntropy);

void BM_RenyiInteger(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ntle::renyi_entropy_integer(kParams, m));
}
BENCHMARK(BM_RenyiInteger)->Arg(2)->Arg(8);

void BM_RawMoment(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ntle::raw_moment(kParams, 2));
}
BENCHMARK(BM_RawMoment);

}  // namespace
