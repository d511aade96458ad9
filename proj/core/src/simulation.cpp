#include "ntle/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "ntle/distribution.hpp"
#include "ntle/error.hpp"
#include "ntle/random.hpp"

namespace ntle {

namespace {

double component(const NtleParams& p, int i) {
  return i == 0 ? p.lambda() : i == 1 ? p.beta() : p.delta();
}

std::vector<EstimationMethod> unique_methods(const std::vector<EstimationMethod>& in) {
  std::vector<EstimationMethod> out;
  for (EstimationMethod m : in) {
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

struct Outcome {
  std::optional<NtleParams> estimate;
  double seconds = 0.0;
};

}  // namespace

std::string_view to_string(Parameter parameter) noexcept {
  switch (parameter) {
    case Parameter::lambda: return "lambda";
    case Parameter::beta: return "beta";
    case Parameter::delta: return "delta";
  }
  return "?";
}

void SimulationConfig::validate() const {
  if (sample_sizes.empty()) throw DomainError("simulation: sample_sizes must not be empty");
  for (std::size_t n : sample_sizes) {
    if (n < Sample::kMinSize) {
      throw DomainError("simulation: every sample size must be >= 3, got " + std::to_string(n));
    }
  }
  if (methods.empty()) throw DomainError("simulation: methods must not be empty");
  if (replications < 1) throw DomainError("simulation: replications must be >= 1");
  if (bayes) bayes->validate();
}

std::array<Metrics, 3> compute_metrics(std::span<const NtleParams> estimates,
                                       const NtleParams& truth) {
  if (estimates.empty()) throw DomainError("compute_metrics: no estimates");
  const double r = static_cast<double>(estimates.size());
  std::array<Metrics, 3> out{};
  for (int i = 0; i < 3; ++i) {
    const double theta = component(truth, i);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const NtleParams& e : estimates) {
      const double err = component(e, i) - theta;
      sum += err;
      sum_sq += err * err;
    }
    const double bias = sum / r;
    const double rmse = std::sqrt(sum_sq / r);
    double se = 0.0;
    if (estimates.size() > 1) {
      double ss = 0.0;
      for (const NtleParams& e : estimates) {
        const double d = component(e, i) - theta - bias;
        ss += d * d;
      }
      se = std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
    }
    out[i] = {bias, rmse * rmse, rmse, se};
  }
  return out;
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t n, int replication) noexcept {
  return derive_seed(base_seed, n, static_cast<std::uint64_t>(replication));
}

std::vector<double> replication_sample(const SimulationConfig& config, std::size_t n,
                                       int replication) {
  return sample(config.true_params, n, replication_seed(config.base_seed, n, replication));
}

Estimator default_estimator(const SimulationConfig& config) {
  FitOptions options;
  options.compute_information = false;
  const BayesConfig bayes = config.bayes.value_or(BayesConfig{});
  return [options, bayes](EstimationMethod method, const Sample& s, std::uint64_t seed) {
    if (method == EstimationMethod::BAYES) {
      BayesConfig b = bayes;
      b.seed = derive_seed(bayes.seed, seed, 0);
      return fit_bayes(s, b);
    }
    return fit(method, s, options);
  };
}

SimulationReport run_campaign(const SimulationConfig& config) {
  return run_campaign(config, default_estimator(config));
}

SimulationReport run_campaign(const SimulationConfig& config, const Estimator& estimator) {
  config.validate();
  const auto methods = unique_methods(config.methods);
  const std::size_t n_methods = methods.size();
  const std::size_t reps = static_cast<std::size_t>(config.replications);
  const std::size_t tasks = config.sample_sizes.size() * reps;

  // outcomes[task * n_methods + method], task = size_index * reps + r
  std::vector<Outcome> outcomes(tasks * n_methods);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t task = next++; task < tasks; task = next++) {
      const std::size_t size_index = task / reps;
      const int r = static_cast<int>(task % reps);
      const std::size_t n = config.sample_sizes[size_index];
      const std::uint64_t seed = replication_seed(config.base_seed, n, r);
      const Sample s(sample(config.true_params, n, seed));
      for (std::size_t m = 0; m < n_methods; ++m) {
        Outcome& out = outcomes[task * n_methods + m];
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const FitResult fit = estimator(methods[m], s, seed);
          if (fit.converged) out.estimate = fit.params;
        } catch (const std::exception&) {
          out.estimate.reset();
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      }
    }
  };

  unsigned threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SimulationReport report{config, {}, {}};
  report.config.methods = methods;
  for (std::size_t size_index = 0; size_index < config.sample_sizes.size(); ++size_index) {
    const std::size_t n = config.sample_sizes[size_index];
    for (std::size_t m = 0; m < n_methods; ++m) {
      std::vector<NtleParams> estimates;
      double seconds = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const Outcome& o = outcomes[(size_index * reps + r) * n_methods + m];
        seconds += o.seconds;
        if (o.estimate) estimates.push_back(*o.estimate);
      }
      const int failures = static_cast<int>(reps - estimates.size());
      SimulationCell cell{methods[m], n, failures, seconds, std::nullopt};
      std::array<Metrics, 3> metrics;
      if (estimates.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        metrics.fill({nan, nan, nan, nan});
        cell.diagnostic = std::string(to_string(methods[m])) + " failed on all " +
                          std::to_string(reps) + " replications at n=" + std::to_string(n);
      } else {
        metrics = compute_metrics(estimates, config.true_params);
      }
      for (int i = 0; i < 3; ++i) {
        report.rows.push_back({methods[m], n, kAllParameters[i], metrics[i], failures,
                               static_cast<int>(estimates.size())});
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace ntle
