#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ntle/estimation.hpp"
#include "ntle/params.hpp"
#include "ntle/sample.hpp"

namespace ntle {

enum class ModelKind { exponential, logistic_exponential, ntle };

std::string_view to_string(ModelKind kind) noexcept;

/// A fitted member of the family. Exponential and logistic-exponential are
/// stored as full triples with beta = 1, delta = 0 and delta = 0 respectively.
struct CandidateModel {
  ModelKind kind;
  NtleParams params;
  EstimationMethod method;

  int parameter_count() const noexcept;
  /// "exponential", "logistic_exponential" or "ntle_<method>".
  std::string label() const;
};

struct InformationCriteria {
  double aic;
  double bic;
  double caic;
  double hqic;
};

/// Throws DomainError unless m >= 2 and p >= 1.
InformationCriteria information_criteria(double loglik, int p, std::size_t m);

/// max_i max(i/m - G(y_(i)), G(y_(i)) - (i-1)/m) over sorted values.
double ks_statistic(const NtleParams& p, std::span<const double> sorted);
double ks_statistic(const CandidateModel& model, const Sample& s);

/// Limiting Kolmogorov tail probability P(K > x).
double kolmogorov_tail(double x);
/// Asymptotic p-value kolmogorov_tail(sqrt(m) d).
double ks_pvalue(double d, std::size_t m);

struct GofRow {
  CandidateModel model;
  double loglik;
  InformationCriteria criteria;
  double ks_stat;
  double ks_pvalue;
  bool converged;
  /// Set when the model could not be fitted; the numeric fields are then NaN.
  std::optional<std::string> failure;
};

struct GofReport {
  /// Sorted by AIC, failed rows last.
  std::vector<GofRow> rows;
  std::size_t m;
};

/// Exponential (closed-form MLE), logistic-exponential (MLE with delta = 0)
/// and NTLE by each requested method; information criteria and K-S figures
/// are evaluated at each model's own estimates.
GofReport compare_models(const Sample& s, const std::vector<EstimationMethod>& ntle_methods,
                         const FitOptions& options = {});

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  /// counts / (m * width)
  std::vector<double> density;
  std::string rule;
};

/// Freedman-Diaconis bins, falling back to ceil(sqrt(m)) bins when the
/// interquartile range is zero.
Histogram histogram(const Sample& s);

struct PlotData {
  std::vector<double> y;
  std::vector<double> empirical_cdf;
  std::vector<std::string> labels;
  /// cdf[k][i] and pdf[k][i] for model k at y[i]; pdf may be +infinity at 0.
  std::vector<std::vector<double>> cdf;
  std::vector<std::vector<double>> pdf;
  Histogram histogram;
};

/// Uniform grid of grid_size points over [0, 1.05 max(s)], with max(s) itself
/// inserted. Failed rows are skipped. Throws DomainError for grid_size < 2.
PlotData emit_plot_data(const GofReport& report, const Sample& s, std::size_t grid_size);

}  // namespace ntle
