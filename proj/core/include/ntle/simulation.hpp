#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ntle/estimation.hpp"
#include "ntle/params.hpp"
#include "ntle/sample.hpp"

namespace ntle {

enum class Parameter { lambda, beta, delta };

inline constexpr std::array<Parameter, 3> kAllParameters = {Parameter::lambda, Parameter::beta,
                                                            Parameter::delta};

std::string_view to_string(Parameter parameter) noexcept;

struct SimulationConfig {
  NtleParams true_params{1.0, 1.5, 0.5};
  std::vector<std::size_t> sample_sizes;
  /// Duplicates are ignored; order is kept for reporting.
  std::vector<EstimationMethod> methods;
  int replications = 1000;
  std::uint64_t base_seed = 0;
  std::optional<BayesConfig> bayes;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;

  /// Throws DomainError describing the first violated constraint.
  void validate() const;
};

struct Metrics {
  double bias;
  double mse;
  double rmse;
  /// Sample standard deviation of the errors divided by sqrt(R); 0 for R = 1.
  double mc_std_error;
};

/// Bias, MSE, RMSE and Monte Carlo standard error for lambda, beta, delta.
/// rmse is stored first and mse = rmse * rmse so rmse^2 == mse exactly.
/// Throws DomainError for an empty input.
std::array<Metrics, 3> compute_metrics(std::span<const NtleParams> estimates,
                                       const NtleParams& truth);

struct SimulationRow {
  EstimationMethod method;
  std::size_t n;
  Parameter parameter;
  Metrics metrics;  // NaN when the cell is empty
  int failures;
  int used;
};

struct SimulationCell {
  EstimationMethod method;
  std::size_t n;
  int failures;
  double elapsed_seconds;
  /// Set when every replication of the cell failed.
  std::optional<std::string> diagnostic;
};

struct SimulationReport {
  SimulationConfig config;
  std::vector<SimulationRow> rows;
  std::vector<SimulationCell> cells;
  static constexpr std::string_view kFailurePolicy =
      "non-converged or failed fits are excluded from the metrics and counted in failures";
};

/// Fits one replication. The seed is unique per (n, replication) and may be
/// used by randomised estimators.
using Estimator =
    std::function<FitResult(EstimationMethod, const Sample&, std::uint64_t replication_seed)>;

std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t n, int replication) noexcept;

/// The sample every method sees for (n, replication).
std::vector<double> replication_sample(const SimulationConfig& config, std::size_t n,
                                       int replication);

/// The estimator used by run_campaign(config): the library fits with
/// information matrices skipped and a per-replication Bayes seed.
Estimator default_estimator(const SimulationConfig& config);

SimulationReport run_campaign(const SimulationConfig& config);
SimulationReport run_campaign(const SimulationConfig& config, const Estimator& estimator);

}  // namespace ntle
