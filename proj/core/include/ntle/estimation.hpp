#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ntle/optimizer.hpp"
#include "ntle/params.hpp"
#include "ntle/sample.hpp"

namespace ntle {

enum class EstimationMethod { MLE, MME, LSE, WLSE, MPS, BAYES, ADE, CVME, PCE, MGFE };

inline constexpr std::array<EstimationMethod, 10> kAllMethods = {
    EstimationMethod::MLE,  EstimationMethod::MME,   EstimationMethod::LSE,
    EstimationMethod::WLSE, EstimationMethod::MPS,   EstimationMethod::BAYES,
    EstimationMethod::ADE,  EstimationMethod::CVME,  EstimationMethod::PCE,
    EstimationMethod::MGFE};

std::string_view to_string(EstimationMethod method) noexcept;
/// Case-insensitive; nullopt for unknown names.
std::optional<EstimationMethod> parse_method(std::string_view name);

struct Interval {
  double lower;
  double upper;
};

struct FitResult {
  NtleParams params;
  EstimationMethod method;
  /// MLE: maximised log-likelihood. MPS: maximised sum of log spacings.
  /// MME: residual norm. BAYES: log-likelihood at the posterior mean.
  /// Everything else: the minimised criterion.
  double objective;
  bool converged;
  /// Objective evaluations (optimiser) or chain iterations (BAYES).
  int iterations;
  /// Order (lambda, beta, delta). MLE: from the observed information.
  /// BAYES: posterior standard deviations and 2.5%/97.5% quantiles.
  std::optional<std::array<double, 3>> std_error;
  std::optional<std::array<Interval, 3>> ci95;
  std::vector<std::string> warnings;
  std::optional<double> acceptance_rate;
  /// Other local solutions found by the multi-start (MME roots).
  std::vector<NtleParams> alternatives;
};

struct BayesConfig {
  double prior_shape_lambda = 1.0;
  double prior_rate_lambda = 0.5;
  double prior_shape_beta = 1.0;
  double prior_rate_beta = 0.5;
  int iterations = 10000;  // including burn-in
  int burn_in = 2000;
  std::array<double, 3> proposal_scales = {0.1, 0.1, 0.2};  // ln lambda, ln beta, atanh delta
  bool adapt = true;
  std::uint64_t seed = 1;

  /// Throws DomainError describing the first violated constraint.
  void validate() const;
};

enum class PceDomain { quantile, cdf };

/// Fix beta and/or delta during the search (LE is delta = 0).
struct ParameterPins {
  std::optional<double> beta;
  std::optional<double> delta;
};

struct FitOptions {
  /// Number of coarse-grid points used to seed the simplex search.
  int starts = 8;
  /// Settings for the final polish of the best start.
  NelderMeadOptions optimizer{};
  PceDomain pce_domain = PceDomain::quantile;
  ParameterPins pins{};
  /// Extra starting points searched alongside the grid picks.
  std::vector<NtleParams> extra_starts{};
  BayesConfig bayes{};
  /// MLE: compute stderr/ci95 from the observed information.
  bool compute_information = true;
};

// Criteria. Those over order statistics take the values sorted ascending.

/// sum log g(y_i); -infinity (never NaN) if any term is not finite.
double log_likelihood(const NtleParams& p, std::span<const double> y);
double log_likelihood(const NtleParams& p, const Sample& s);

double wlse_weight(std::size_t n, std::size_t i);
double lse_criterion(const NtleParams& p, std::span<const double> sorted);
double wlse_criterion(const NtleParams& p, std::span<const double> sorted);
double cvme_criterion(const NtleParams& p, std::span<const double> sorted);
/// +infinity when some G(y_i) is 0 or 1.
double ade_criterion(const NtleParams& p, std::span<const double> sorted);
/// sum_{i=1}^{n+1} log D_i with tie repair; to be maximised.
double mps_criterion(const NtleParams& p, std::span<const double> sorted);
double pce_criterion(const NtleParams& p, std::span<const double> sorted,
                     PceDomain domain = PceDomain::quantile);
double mgfe_criterion(const NtleParams& p, std::span<const double> sorted);
/// Sum of squared relative residuals of the first three raw moments.
double mme_criterion(const NtleParams& p, const std::array<double, 3>& sample_moments);

struct ObservedInformation {
  std::array<std::array<double, 3>, 3> matrix;
  bool positive_definite;
  std::optional<std::array<std::array<double, 3>, 3>> covariance;
  std::optional<std::array<double, 3>> std_error;
};

/// Central finite-difference Hessian of -loglik in (lambda, beta, delta),
/// symmetrised. Steps max(1e-5, 1e-4|theta|), kept inside the parameter space.
ObservedInformation observed_information(const NtleParams& p, const Sample& s);

FitResult fit_mle(const Sample& s, const FitOptions& options = {});
FitResult fit_mme(const Sample& s, const FitOptions& options = {});
FitResult fit_lse(const Sample& s, const FitOptions& options = {});
FitResult fit_wlse(const Sample& s, const FitOptions& options = {});
/// Throws PreconditionError when every observation is identical.
FitResult fit_mps(const Sample& s, const FitOptions& options = {});
FitResult fit_ade(const Sample& s, const FitOptions& options = {});
FitResult fit_cvme(const Sample& s, const FitOptions& options = {});
FitResult fit_pce(const Sample& s, const FitOptions& options = {});
FitResult fit_mgfe(const Sample& s, const FitOptions& options = {});
/// Random-walk Metropolis-Hastings in (ln lambda, ln beta, atanh delta) with
/// Gamma priors on lambda, beta and a standard normal prior on atanh delta.
FitResult fit_bayes(const Sample& s, const BayesConfig& config);

FitResult fit(EstimationMethod method, const Sample& s, const FitOptions& options = {});

namespace detail {

/// Highest-likelihood point of the coarse starting grid.
NtleParams likelihood_grid_start(const Sample& s);

}  // namespace detail

}  // namespace ntle
