#include <benchmark/benchmark.h>

#include "ntle/distribution.hpp"
#include "ntle/estimation.hpp"

namespace {

const ntle::NtleParams kParams(1.0, 1.5, 0.5);

void BM_LogLikelihood(benchmark::State& state) {
  const ntle::Sample s(ntle::sample(kParams, static_cast<std::size_t>(state.range(0)), 1));
  for (auto _ : state) benchmark::DoNotOptimize(ntle::log_likelihood(kParams, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogLikelihood)->Arg(100)->Arg(10000);

void BM_FitMle(benchmark::State& state) {
  const ntle::Sample s(ntle::sample(kParams, static_cast<std::size_t>(state.range(0)), 2));
  ntle::FitOptions options;
  options.compute_information = false;
  for (auto _ : state) benchmark::DoNotOptimize(ntle::fit_mle(s, options));
}
BENCHMARK(BM_FitMle)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FitMethod(benchmark::State& state) {
  const auto method = ntle::kAllMethods[static_cast<std::size_t>(state.range(0))];
  const ntle::Sample s(ntle::sample(kParams, 200, 3));
  for (auto _ : state) benchmark::DoNotOptimize(ntle::fit(method, s, {}));
  state.SetLabel(std::string(ntle::to_string(method)));
}
BENCHMARK(BM_FitMethod)
    ->DenseRange(0, 9)
    ->Unit(benchmark::kMillisecond);

}  // namespace
