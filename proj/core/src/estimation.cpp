#include "ntle/estimation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "ntle/analytics.hpp"
#include "ntle/distribution.hpp"
#include "ntle/error.hpp"

namespace ntle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Objective = std::function<double(const NtleParams&)>;

// Box in z = (ln lambda, ln beta, atanh delta); ln lambda is centred on the
// data scale.
constexpr double kLogLambdaHalfWidth = 14.0;
constexpr double kLogBetaBound = 5.0;
constexpr double kEtaBound = 9.0;

double median_of(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double plotting_position(std::size_t i, std::size_t n) {
  return static_cast<double>(i) / static_cast<double>(n + 1);
}

double evaluate_safely(const Objective& f, const NtleParams& p) {
  try {
    const double v = f(p);
    return std::isnan(v) ? kInf : v;
  } catch (const std::domain_error&) {
    return kInf;
  } catch (const std::invalid_argument&) {
    return kInf;
  } catch (const std::runtime_error&) {
    return kInf;
  }
}

class Coordinates {
 public:
  Coordinates(const Sample& s, const ParameterPins& pins) : pins_(pins) {
    if (pins.beta && !(*pins.beta > 0.0 && std::isfinite(*pins.beta))) {
      throw DomainError("pinned beta must be finite and > 0");
    }
    if (pins.delta && !(*pins.delta > -1.0 && *pins.delta < 1.0)) {
      throw DomainError("pinned delta must lie in (-1, 1)");
    }
    const double centre = -std::log(s.mean());
    lo_ = {centre - kLogLambdaHalfWidth, -kLogBetaBound, -kEtaBound};
    hi_ = {centre + kLogLambdaHalfWidth, kLogBetaBound, kEtaBound};
    free_.push_back(0);
    if (!pins.beta) free_.push_back(1);
    if (!pins.delta) free_.push_back(2);
  }

  std::optional<NtleParams> to_params(std::span<const double> x) const {
    std::array<double, 3> z = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < free_.size(); ++k) {
      const int i = free_[k];
      if (!(x[k] >= lo_[i] && x[k] <= hi_[i])) return std::nullopt;
      z[i] = x[k];
    }
    const double beta = pins_.beta ? *pins_.beta : std::exp(z[1]);
    const double delta = pins_.delta ? *pins_.delta : std::tanh(z[2]);
    if (!NtleParams::is_valid(std::exp(z[0]), beta, delta)) return std::nullopt;
    return NtleParams(std::exp(z[0]), beta, delta);
  }

  std::vector<double> from_params(const NtleParams& p) const {
    const std::array<double, 3> z = {std::log(p.lambda()), std::log(p.beta()),
                                     std::atanh(p.delta())};
    std::vector<double> x;
    for (int i : free_) {
      const double margin = 1e-3 * (hi_[i] - lo_[i]);
      x.push_back(std::clamp(z[i], lo_[i] + margin, hi_[i] - margin));
    }
    return x;
  }

  NtleParams pinned(const NtleParams& p) const {
    return NtleParams(p.lambda(), pins_.beta.value_or(p.beta()), pins_.delta.value_or(p.delta()));
  }

  const ParameterPins& pins() const { return pins_; }

 private:
  ParameterPins pins_;
  std::vector<int> free_;
  std::array<double, 3> lo_{};
  std::array<double, 3> hi_{};
};

// Coarse grid over (beta, delta), with lambda scaled so that the model median
// matches the sample median, then spread by a factor on either side.
std::vector<NtleParams> grid_points(const Sample& s, const ParameterPins& pins) {
  const std::vector<double> betas =
      pins.beta ? std::vector<double>{*pins.beta} : std::vector<double>{0.5, 0.8, 1.2, 1.8, 3.0};
  const std::vector<double> deltas = pins.delta
                                         ? std::vector<double>{*pins.delta}
                                         : std::vector<double>{-0.7, -0.3, 0.0, 0.3, 0.7};
  const double med = median_of(s.values());
  std::vector<NtleParams> out;
  for (double beta : betas) {
    for (double delta : deltas) {
      const double lambda0 = quantile(NtleParams(1.0, beta, delta), 0.5) / med;
      for (double factor : {0.6, 1.0, 1.6}) {
        out.emplace_back(lambda0 * factor, beta, delta);
      }
    }
  }
  return out;
}

struct Candidate {
  NtleParams params;
  double value;
};

struct SearchResult {
  NtleParams params;
  double value;
  bool converged;
  int evaluations;
  std::vector<Candidate> local;
};

SearchResult search(const Sample& s, const Objective& objective, const FitOptions& options) {
  const Coordinates coords(s, options.pins);
  auto fx = [&](std::span<const double> x) {
    const auto p = coords.to_params(x);
    return p ? evaluate_safely(objective, *p) : kInf;
  };

  int evaluations = 0;
  std::vector<Candidate> ranked;
  for (const NtleParams& p : grid_points(s, options.pins)) {
    ranked.push_back({p, evaluate_safely(objective, p)});
    ++evaluations;
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

  std::vector<NtleParams> starts;
  const std::size_t wanted = static_cast<std::size_t>(std::max(1, options.starts));
  for (std::size_t i = 0; i < ranked.size() && starts.size() < wanted; ++i) {
    if (std::isfinite(ranked[i].value) || starts.empty()) starts.push_back(ranked[i].params);
  }
  for (const NtleParams& p : options.extra_starts) starts.push_back(coords.pinned(p));

  NelderMeadOptions coarse;
  coarse.max_evaluations = 400;
  coarse.f_abs_tol = 1e-9;
  coarse.f_rel_tol = 1e-7;
  coarse.x_tol = 1e-4;
  coarse.restarts = 0;

  std::vector<Candidate> local;
  std::vector<double> best_x;
  double best_value = kInf;
  for (const NtleParams& start : starts) {
    const OptimizeResult r = nelder_mead(fx, coords.from_params(start), coarse);
    evaluations += r.evaluations;
    if (const auto p = coords.to_params(r.x)) local.push_back({*p, r.value});
    if (best_x.empty() || r.value < best_value) {
      best_x = r.x;
      best_value = r.value;
    }
  }

  const OptimizeResult polished = nelder_mead(fx, best_x, options.optimizer);
  evaluations += polished.evaluations;
  const bool use_polished = polished.value <= best_value;
  const std::vector<double>& x = use_polished ? polished.x : best_x;
  const auto params = coords.to_params(x);
  const double value = use_polished ? polished.value : best_value;
  return {params.value_or(ranked.front().params), value,
          polished.converged && std::isfinite(value) && params.has_value(), evaluations,
          std::move(local)};
}

FitResult make_result(EstimationMethod method, const SearchResult& r, double objective) {
  FitResult out{r.params, method, objective, r.converged, r.evaluations, std::nullopt,
                std::nullopt, {}, std::nullopt, {}};
  if (!r.converged) {
    out.warnings.push_back(std::string(to_string(method)) + ": optimizer did not converge after " +
                           std::to_string(r.evaluations) + " objective evaluations");
  }
  return out;
}

FitResult fit_by_minimisation(EstimationMethod method, const Sample& s, const Objective& f,
                              const FitOptions& options) {
  const SearchResult r = search(s, f, options);
  return make_result(method, r, r.value);
}

double relative_distance(const NtleParams& a, const NtleParams& b) {
  return std::max({std::abs(a.lambda() - b.lambda()) / b.lambda(),
                   std::abs(a.beta() - b.beta()) / b.beta(), std::abs(a.delta() - b.delta())});
}

// One term of the log-likelihood, with the same (v, w) evaluation as log_pdf
// but without the bookkeeping for y = 0.
inline double log_density_term(double lambda, double beta, double delta, double log_bl, double y) {
  const double x = lambda * y;
  const double lx = detail::log_expm1(x);
  const double lu = beta * lx;
  double v;
  double w;
  double log_w;
  if (lu >= 0.0) {
    const double e = std::exp(-lu);
    v = 1.0 / (1.0 + e);
    w = e * v;
    log_w = -lu - std::log1p(e);
  } else {
    const double e = std::exp(lu);
    w = 1.0 / (1.0 + e);
    v = e * w;
    log_w = -std::log1p(e);
  }
  const double factor = 1.0 + delta * (w - v);
  if (!(factor > 0.0)) return -kInf;
  return log_bl + x + (beta - 1.0) * lx + std::log(factor) + 2.0 * log_w;
}

}  // namespace

std::string_view to_string(EstimationMethod method) noexcept {
  switch (method) {
    case EstimationMethod::MLE: return "MLE";
    case EstimationMethod::MME: return "MME";
    case EstimationMethod::LSE: return "LSE";
    case EstimationMethod::WLSE: return "WLSE";
    case EstimationMethod::MPS: return "MPS";
    case EstimationMethod::BAYES: return "BAYES";
    case EstimationMethod::ADE: return "ADE";
    case EstimationMethod::CVME: return "CVME";
    case EstimationMethod::PCE: return "PCE";
    case EstimationMethod::MGFE: return "MGFE";
  }
  return "?";
}

std::optional<EstimationMethod> parse_method(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (EstimationMethod m : kAllMethods) {
    if (to_string(m) == upper) return m;
  }
  return std::nullopt;
}

double log_likelihood(const NtleParams& p, std::span<const double> y) {
  const double lambda = p.lambda();
  const double beta = p.beta();
  const double delta = p.delta();
  const double log_bl = std::log(beta * lambda);
  double sum = 0.0;
  for (double yi : y) {
    if (!(yi > 0.0) || !std::isfinite(yi)) return -kInf;
    sum += log_density_term(lambda, beta, delta, log_bl, yi);
  }
  return std::isfinite(sum) ? sum : -kInf;
}

double log_likelihood(const NtleParams& p, const Sample& s) { return log_likelihood(p, s.values()); }

double wlse_weight(std::size_t n, std::size_t i) {
  if (i < 1 || i > n) {
    throw DomainError("wlse_weight: index must lie in [1, n]");
  }
  const double np1 = static_cast<double>(n + 1);
  return np1 * np1 * (np1 + 1.0) / (static_cast<double>(i) * static_cast<double>(n - i + 1));
}

double lse_criterion(const NtleParams& p, std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double r = cdf(p, sorted[i - 1]) - plotting_position(i, n);
    sum += r * r;
  }
  return sum;
}

double wlse_criterion(const NtleParams& p, std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double r = cdf(p, sorted[i - 1]) - plotting_position(i, n);
    sum += wlse_weight(n, i) * r * r;
  }
  return sum;
}

double cvme_criterion(const NtleParams& p, std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  const double dn = static_cast<double>(n);
  double sum = 1.0 / (12.0 * dn);
  for (std::size_t i = 1; i <= n; ++i) {
    const double r = cdf(p, sorted[i - 1]) - (2.0 * static_cast<double>(i) - 1.0) / (2.0 * dn);
    sum += r * r;
  }
  return sum;
}

double ade_criterion(const NtleParams& p, std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double term = log_cdf(p, sorted[i - 1]) + log_survival(p, sorted[n - i]);
    sum += (2.0 * static_cast<double>(i) - 1.0) * term;
  }
  const double a = -dn - sum / dn;
  return std::isfinite(a) ? a : kInf;
}

double mps_criterion(const NtleParams& p, std::span<const double> sorted) {
  constexpr double kFloor = 1e-12;
  const std::size_t n = sorted.size();
  auto repaired = [&](double d, double left, double right) {
    if (d >= kFloor) return d;
    const double local = pdf(p, 0.5 * (left + right)) * (right - left);
    return std::isfinite(local) && local >= kFloor ? local : kFloor;
  };
  double sum = 0.0;
  double prev_y = 0.0;
  double prev_g = 0.0;
  double prev_s = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = sorted[i];
    const double g = cdf(p, y);
    const double sv = survival(p, y);
    // difference the smaller tail to avoid cancellation
    const double d = prev_g > 0.5 ? prev_s - sv : g - prev_g;
    sum += std::log(repaired(d, prev_y, y));
    prev_y = y;
    prev_g = g;
    prev_s = sv;
  }
  sum += std::log(std::max(prev_s, kFloor));
  return sum;
}

double pce_criterion(const NtleParams& p, std::span<const double> sorted, PceDomain domain) {
  if (domain == PceDomain::cdf) return lse_criterion(p, sorted);
  const std::size_t n = sorted.size();
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double r = sorted[i - 1] - quantile(p, plotting_position(i, n));
    sum += r * r;
  }
  return std::isfinite(sum) ? sum : kInf;
}

double mgfe_criterion(const NtleParams& p, std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  const double dn = static_cast<double>(n);
  double m = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    m = std::max(m, std::abs(cdf(p, sorted[i - 1]) - (static_cast<double>(i) - 0.5) / dn));
  }
  return m;
}

double mme_criterion(const NtleParams& p, const std::array<double, 3>& sample_moments) {
  const QuadratureSpec q{1e-13, 1e-10, 2000};
  double sum = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double m = sample_moments[k - 1];
    const double r = (raw_moment(p, k, q) - m) / m;
    sum += r * r;
  }
  return sum;
}

ObservedInformation observed_information(const NtleParams& p, const Sample& s) {
  const std::array<double, 3> theta = {p.lambda(), p.beta(), p.delta()};
  std::array<double, 3> h{};
  for (int i = 0; i < 3; ++i) h[i] = std::max(1e-5, 1e-4 * std::abs(theta[i]));
  h[0] = std::min(h[0], 0.5 * theta[0]);
  h[1] = std::min(h[1], 0.5 * theta[1]);
  h[2] = std::min(h[2], 0.5 * (1.0 - std::abs(theta[2])));

  auto f = [&](std::array<double, 3> t) {
    return -log_likelihood(NtleParams(t[0], t[1], t[2]), s);
  };
  auto shifted = [&](int i, double si, int j, double sj) {
    auto t = theta;
    t[i] += si * h[i];
    t[j] += sj * h[j];
    return f(t);
  };

  const double f0 = f(theta);
  ObservedInformation out{};
  for (int i = 0; i < 3; ++i) {
    auto up = theta;
    auto down = theta;
    up[i] += h[i];
    down[i] -= h[i];
    out.matrix[i][i] = (f(up) - 2.0 * f0 + f(down)) / (h[i] * h[i]);
    for (int j = 0; j < i; ++j) {
      const double v = (shifted(i, 1, j, 1) - shifted(i, 1, j, -1) - shifted(i, -1, j, 1) +
                        shifted(i, -1, j, -1)) /
                       (4.0 * h[i] * h[j]);
      out.matrix[i][j] = v;
      out.matrix[j][i] = v;
    }
  }

  Eigen::Matrix3d m;
  bool finite = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m(i, j) = out.matrix[i][j];
      finite = finite && std::isfinite(m(i, j));
    }
  }
  const Eigen::LLT<Eigen::Matrix3d> llt(m);
  out.positive_definite = finite && llt.info() == Eigen::Success;
  if (out.positive_definite) {
    const Eigen::Matrix3d cov = llt.solve(Eigen::Matrix3d::Identity());
    std::array<std::array<double, 3>, 3> c{};
    std::array<double, 3> se{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) c[i][j] = 0.5 * (cov(i, j) + cov(j, i));
      se[i] = std::sqrt(c[i][i]);
    }
    out.covariance = c;
    out.std_error = se;
  }
  return out;
}

FitResult fit_mle(const Sample& s, const FitOptions& options) {
  const auto values = s.values();
  const SearchResult r = search(
      s, [&](const NtleParams& p) { return -log_likelihood(p, values); }, options);
  FitResult out = make_result(EstimationMethod::MLE, r, -r.value);
  const bool pinned = options.pins.beta || options.pins.delta;
  if (options.compute_information && !pinned && std::isfinite(r.value)) {
    const ObservedInformation info = observed_information(out.params, s);
    if (info.std_error) {
      const std::array<double, 3> theta = {out.params.lambda(), out.params.beta(),
                                           out.params.delta()};
      std::array<Interval, 3> ci{};
      for (int i = 0; i < 3; ++i) {
        const double half = 1.959963984540054 * (*info.std_error)[i];
        ci[i] = {theta[i] - half, theta[i] + half};
      }
      out.std_error = info.std_error;
      out.ci95 = ci;
    } else {
      out.warnings.push_back(
          "MLE: observed information is not positive definite; confidence intervals omitted");
    }
  }
  return out;
}

FitResult fit_mme(const Sample& s, const FitOptions& options) {
  const std::array<double, 3> moments = {s.raw_moment(1), s.raw_moment(2), s.raw_moment(3)};
  for (double m : moments) {
    if (!std::isfinite(m)) throw DomainError("MME: sample moments must be finite");
  }
  const SearchResult r = search(
      s, [&](const NtleParams& p) { return mme_criterion(p, moments); }, options);
  FitResult out = make_result(EstimationMethod::MME, r, std::sqrt(r.value));
  constexpr double kRootResidual = 1e-4;
  for (const Candidate& c : r.local) {
    if (!(std::sqrt(c.value) < kRootResidual) || relative_distance(c.params, out.params) < 1e-2) {
      continue;
    }
    const bool seen = std::any_of(out.alternatives.begin(), out.alternatives.end(),
                                  [&](const NtleParams& a) { return relative_distance(c.params, a) < 1e-2; });
    if (!seen) out.alternatives.push_back(c.params);
  }
  if (!out.alternatives.empty()) {
    out.warnings.push_back("MME: " + std::to_string(out.alternatives.size() + 1) +
                           " distinct moment solutions found; the minimal residual one is reported");
  }
  return out;
}

FitResult fit_lse(const Sample& s, const FitOptions& options) {
  const auto v = s.values();
  return fit_by_minimisation(
      EstimationMethod::LSE, s, [&](const NtleParams& p) { return lse_criterion(p, v); }, options);
}

FitResult fit_wlse(const Sample& s, const FitOptions& options) {
  const auto v = s.values();
  return fit_by_minimisation(
      EstimationMethod::WLSE, s, [&](const NtleParams& p) { return wlse_criterion(p, v); }, options);
}

FitResult fit_mps(const Sample& s, const FitOptions& options) {
  if (s.min() == s.max()) {
    throw PreconditionError("MPS: every observation is identical, all spacings are degenerate");
  }
  const auto v = s.values();
  const SearchResult r = search(
      s, [&](const NtleParams& p) { return -mps_criterion(p, v); }, options);
  return make_result(EstimationMethod::MPS, r, -r.value);
}

FitResult fit_ade(const Sample& s, const FitOptions& options) {
  const auto v = s.values();
  return fit_by_minimisation(
      EstimationMethod::ADE, s, [&](const NtleParams& p) { return ade_criterion(p, v); }, options);
}

FitResult fit_cvme(const Sample& s, const FitOptions& options) {
  const auto v = s.values();
  return fit_by_minimisation(
      EstimationMethod::CVME, s, [&](const NtleParams& p) { return cvme_criterion(p, v); }, options);
}

FitResult fit_pce(const Sample& s, const FitOptions& options) {
  const auto v = s.values();
  const PceDomain domain = options.pce_domain;
  return fit_by_minimisation(
      EstimationMethod::PCE, s, [&](const NtleParams& p) { return pce_criterion(p, v, domain); },
      options);
}

FitResult fit_mgfe(const Sample& s, const FitOptions& options) {
  const auto v = s.values();
  return fit_by_minimisation(
      EstimationMethod::MGFE, s, [&](const NtleParams& p) { return mgfe_criterion(p, v); }, options);
}

FitResult fit(EstimationMethod method, const Sample& s, const FitOptions& options) {
  switch (method) {
    case EstimationMethod::MLE: return fit_mle(s, options);
    case EstimationMethod::MME: return fit_mme(s, options);
    case EstimationMethod::LSE: return fit_lse(s, options);
    case EstimationMethod::WLSE: return fit_wlse(s, options);
    case EstimationMethod::MPS: return fit_mps(s, options);
    case EstimationMethod::BAYES: return fit_bayes(s, options.bayes);
    case EstimationMethod::ADE: return fit_ade(s, options);
    case EstimationMethod::CVME: return fit_cvme(s, options);
    case EstimationMethod::PCE: return fit_pce(s, options);
    case EstimationMethod::MGFE: return fit_mgfe(s, options);
  }
  throw DomainError("unknown estimation method");
}

namespace detail {

NtleParams likelihood_grid_start(const Sample& s) {
  std::optional<NtleParams> best;
  double best_ll = -kInf;
  for (const NtleParams& p : grid_points(s, {})) {
    const double ll = log_likelihood(p, s);
    if (!best || ll > best_ll) {
      best = p;
      best_ll = ll;
    }
  }
  return *best;
}

}  // namespace detail

}  // namespace ntle
