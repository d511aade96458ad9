#include "ntle/gof.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "ntle/distribution.hpp"
#include "ntle/error.hpp"

namespace ntle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double type7_quantile(std::span<const double> sorted, double prob) {
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

GofRow evaluate(const CandidateModel& model, const Sample& s, bool converged) {
  const double ll = log_likelihood(model.params, s);
  const double d = ks_statistic(model, s);
  return {model,
          ll,
          information_criteria(ll, model.parameter_count(), s.size()),
          d,
          ks_pvalue(d, s.size()),
          converged,
          std::nullopt};
}

GofRow failed(ModelKind kind, EstimationMethod method, const std::string& why) {
  return {{kind, NtleParams(1.0, 1.0, 0.0), method},
          kNaN,
          {kNaN, kNaN, kNaN, kNaN},
          kNaN,
          kNaN,
          false,
          why};
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::exponential: return "exponential";
    case ModelKind::logistic_exponential: return "logistic_exponential";
    case ModelKind::ntle: return "ntle";
  }
  return "?";
}

int CandidateModel::parameter_count() const noexcept {
  switch (kind) {
    case ModelKind::exponential: return 1;
    case ModelKind::logistic_exponential: return 2;
    case ModelKind::ntle: return 3;
  }
  return 3;
}

std::string CandidateModel::label() const {
  if (kind != ModelKind::ntle) return std::string(to_string(kind));
  std::string name(to_string(method));
  for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return "ntle_" + name;
}

InformationCriteria information_criteria(double loglik, int p, std::size_t m) {
  if (m < 2) throw DomainError("information_criteria: sample size must be >= 2");
  if (p < 1) throw DomainError("information_criteria: parameter count must be >= 1");
  const double dm = static_cast<double>(m);
  const double dp = static_cast<double>(p);
  const double deviance = -2.0 * loglik;
  const double bic = deviance + dp * std::log(dm);
  return {deviance + 2.0 * dp, bic, bic + dp, deviance + 2.0 * dp * std::log(std::log(dm))};
}

double ks_statistic(const NtleParams& p, std::span<const double> sorted) {
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    const double g = cdf(p, sorted[i - 1]);
    d = std::max({d, static_cast<double>(i) / m - g, g - static_cast<double>(i - 1) / m});
  }
  return d;
}

double ks_statistic(const CandidateModel& model, const Sample& s) {
  return ks_statistic(model.params, s.values());
}

double kolmogorov_tail(double x) {
  if (std::isnan(x)) throw DomainError("kolmogorov_tail: argument is NaN");
  if (x <= 0.0) return 1.0;
  constexpr double kTermTol = 1e-12;
  if (x < 1.18) {
    // P(K <= x) = sqrt(2 pi)/x sum_k exp(-(2k-1)^2 pi^2 / (8 x^2)); converges fast for small x.
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double sum = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * c);
      sum += term;
      if (term < kTermTol * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < kTermTol) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double d, std::size_t m) {
  if (!(d >= 0.0 && d <= 1.0)) throw DomainError("ks_pvalue: d must lie in [0, 1]");
  if (m < 1) throw DomainError("ks_pvalue: sample size must be >= 1");
  return kolmogorov_tail(std::sqrt(static_cast<double>(m)) * d);
}

GofReport compare_models(const Sample& s, const std::vector<EstimationMethod>& ntle_methods,
                         const FitOptions& options) {
  GofReport report{{}, s.size()};

  const NtleParams exponential = NtleParams::exponential(1.0 / s.mean());
  report.rows.push_back(
      evaluate({ModelKind::exponential, exponential, EstimationMethod::MLE}, s, true));

  std::optional<NtleParams> le;
  try {
    FitOptions le_options = options;
    le_options.pins = {std::nullopt, 0.0};
    le_options.extra_starts = {exponential};
    le_options.compute_information = false;
    const FitResult fit = fit_mle(s, le_options);
    le = fit.params;
    report.rows.push_back(evaluate(
        {ModelKind::logistic_exponential, fit.params, EstimationMethod::MLE}, s, fit.converged));
  } catch (const std::exception& e) {
    report.rows.push_back(failed(ModelKind::logistic_exponential, EstimationMethod::MLE, e.what()));
  }

  std::vector<EstimationMethod> seen;
  for (EstimationMethod method : ntle_methods) {
    if (std::find(seen.begin(), seen.end(), method) != seen.end()) continue;
    seen.push_back(method);
    try {
      FitOptions ntle_options = options;
      if (method == EstimationMethod::MLE) {
        // Nested starts make the NTLE maximum at least the LE maximum.
        ntle_options.extra_starts.push_back(le.value_or(exponential));
        ntle_options.extra_starts.push_back(exponential);
      }
      const FitResult fit = ntle::fit(method, s, ntle_options);
      report.rows.push_back(evaluate({ModelKind::ntle, fit.params, method}, s, fit.converged));
    } catch (const std::exception& e) {
      report.rows.push_back(failed(ModelKind::ntle, method, e.what()));
    }
  }

  std::stable_sort(report.rows.begin(), report.rows.end(), [](const GofRow& a, const GofRow& b) {
    if (a.failure.has_value() != b.failure.has_value()) return !a.failure.has_value();
    return a.criteria.aic < b.criteria.aic;
  });
  return report;
}

Histogram histogram(const Sample& s) {
  const auto v = s.values();
  const double m = static_cast<double>(v.size());
  const double lo = s.min();
  const double hi = s.max();
  const double iqr = type7_quantile(v, 0.75) - type7_quantile(v, 0.25);

  Histogram h;
  std::size_t bins = 0;
  if (iqr > 0.0 && hi > lo) {
    const double width = 2.0 * iqr / std::cbrt(m);
    bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    h.rule = "freedman_diaconis";
  }
  if (bins < 1 || bins > 10000) {
    bins = static_cast<std::size_t>(std::ceil(std::sqrt(m)));
    h.rule = "sqrt";
  }
  const double span = hi > lo ? hi - lo : 1.0;
  const double width = span / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(lo + width * static_cast<double>(b));
  h.edges.back() = lo + span;
  h.counts.assign(bins, 0);
  for (double y : v) {
    auto b = static_cast<std::size_t>((y - lo) / width);
    ++h.counts[std::min(b, bins - 1)];
  }
  for (std::size_t c : h.counts) h.density.push_back(static_cast<double>(c) / (m * width));
  return h;
}

PlotData emit_plot_data(const GofReport& report, const Sample& s, std::size_t grid_size) {
  if (grid_size < 2) throw DomainError("emit_plot_data: grid_size must be >= 2");
  const auto v = s.values();
  const double upper = 1.05 * s.max();

  PlotData out;
  for (std::size_t i = 0; i < grid_size; ++i) {
    out.y.push_back(upper * static_cast<double>(i) / static_cast<double>(grid_size - 1));
  }
  out.y.push_back(s.max());
  std::sort(out.y.begin(), out.y.end());
  out.y.erase(std::unique(out.y.begin(), out.y.end()), out.y.end());

  const double m = static_cast<double>(v.size());
  for (double y : out.y) {
    const auto count = std::upper_bound(v.begin(), v.end(), y) - v.begin();
    out.empirical_cdf.push_back(static_cast<double>(count) / m);
  }

  for (const GofRow& row : report.rows) {
    if (row.failure) continue;
    out.labels.push_back(row.model.label());
    std::vector<double> c;
    std::vector<double> d;
    for (double y : out.y) {
      c.push_back(cdf(row.model.params, y));
      d.push_back(pdf(row.model.params, y));
    }
    out.cdf.push_back(std::move(c));
    out.pdf.push_back(std::move(d));
  }
  out.histogram = histogram(s);
  return out;
}

}  // namespace ntle
