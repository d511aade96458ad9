#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ntle/analytics.hpp"
#include "ntle/distribution.hpp"
#include "ntle/error.hpp"
#include "ntle/estimation.hpp"
#include "ntle/random.hpp"

namespace {

using ntle::EstimationMethod;
using ntle::NtleParams;
using ntle::Sample;

const NtleParams kTruth(1.0, 1.5, 0.5);

std::vector<double> perfect_sample(const NtleParams& p, std::size_t n) {
  std::vector<double> y;
  for (std::size_t i = 1; i <= n; ++i) y.push_back(ntle::quantile(p, double(i) / double(n + 1)));
  return y;
}

TEST(SampleType, Validation) {
  EXPECT_THROW(Sample({1.0, 2.0}), ntle::DomainError);
  EXPECT_THROW(Sample({1.0, -2.0, 3.0}), ntle::DomainError);
  EXPECT_THROW(Sample({1.0, 0.0, 3.0}), ntle::DomainError);
  EXPECT_THROW(Sample({1.0, std::nan(""), 3.0}), ntle::DomainError);
  const Sample s({3.0, 1.0, 2.0});
  EXPECT_EQ(s[0], 1.0);
  EXPECT_EQ(s.max(), 3.0);
  EXPECT_DOUBLE_EQ(s.mean(), 2.0);
  EXPECT_DOUBLE_EQ(s.raw_moment(2), 14.0 / 3.0);
}

TEST(Methods, NamesRoundTrip) {
  for (EstimationMethod m : ntle::kAllMethods) {
    EXPECT_EQ(ntle::parse_method(ntle::to_string(m)), m);
  }
  EXPECT_EQ(ntle::parse_method("mgfe"), EstimationMethod::MGFE);
  EXPECT_FALSE(ntle::parse_method("ols").has_value());
}

TEST(LogLikelihood, Exponential) {
  EXPECT_NEAR(ntle::log_likelihood({1, 1, 0}, Sample({1, 2, 3})), -6.0, 1e-13);
}

TEST(LogLikelihood, AgreesWithLogPdfSum) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> lam(0.05, 5), bet(0.2, 5), del(-0.99, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const NtleParams p(lam(gen), bet(gen), del(gen));
    const auto y = ntle::sample({1, 1.3, 0.2}, 40, trial);
    double expected = 0;
    for (double v : y) expected += ntle::log_pdf(p, v);
    EXPECT_NEAR(ntle::log_likelihood(p, y), expected, 1e-9 * std::abs(expected))
        << p.to_string();
  }
}

TEST(LogLikelihood, NeverNaN) {
  const std::vector<double> y = {1e-300, 1.0, 1e6};
  for (const NtleParams& p : {NtleParams(1e-8, 40, 0.999), NtleParams(1e3, 0.01, -0.999)}) {
    const double ll = ntle::log_likelihood(p, y);
    EXPECT_FALSE(std::isnan(ll));
  }
}

TEST(Criteria, WlseWeight) {
  EXPECT_NEAR(ntle::wlse_weight(3, 1), 80.0 / 3.0, 1e-13);
  EXPECT_NEAR(ntle::wlse_weight(3, 2), 20.0, 1e-13);
}

TEST(Criteria, PerfectSampleMinima) {
  const NtleParams p0(0.8, 1.7, -0.3);
  const std::size_t n = 50;
  const auto y = perfect_sample(p0, n);
  EXPECT_LT(ntle::lse_criterion(p0, y), 1e-24);
  EXPECT_LT(ntle::wlse_criterion(p0, y), 1e-20);
  EXPECT_LT(ntle::pce_criterion(p0, y), 1e-24);
  EXPECT_LT(ntle::pce_criterion(p0, y, ntle::PceDomain::cdf), 1e-24);

  double cvme = 1.0 / (12.0 * n);
  double gap = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double d = double(i) / (n + 1) - (2.0 * i - 1) / (2.0 * n);
    cvme += d * d;
    gap = std::max(gap, std::abs(double(i) / (n + 1) - (i - 0.5) / n));
  }
  EXPECT_NEAR(ntle::cvme_criterion(p0, y), cvme, 1e-13);
  EXPECT_NEAR(ntle::cvme_criterion(NtleParams(2.5, 0.6, 0.7), perfect_sample({2.5, 0.6, 0.7}, n)),
              cvme, 1e-13);
  EXPECT_LE(ntle::mgfe_criterion(p0, y), gap + 1e-14);
  EXPECT_NEAR(ntle::mps_criterion(p0, y), -(n + 1.0) * std::log(n + 1.0), 1e-9);
}

TEST(Criteria, AdeMinimumNearTruth) {
  const NtleParams p0(0.8, 1.7, -0.3);
  const auto y = perfect_sample(p0, 200);
  const double at = ntle::ade_criterion(p0, y);
  EXPECT_TRUE(std::isfinite(at));
  const auto fit = ntle::fit_ade(Sample(y));
  EXPECT_LE(ntle::ade_criterion(fit.params, y), at);
  EXPECT_NEAR(fit.params.lambda(), 0.8, 0.15);
  EXPECT_NEAR(fit.params.beta(), 1.7, 0.15);
  EXPECT_NEAR(fit.params.delta(), -0.3, 0.3);
}

TEST(Criteria, SingleObservationMgfe) {
  const NtleParams p(1.0, 2.0, 0.1);
  const std::vector<double> one = {ntle::quantile(p, 0.5)};
  EXPECT_NEAR(ntle::mgfe_criterion(p, one), 0.0, 1e-14);
}

TEST(Criteria, MmeExactMoments) {
  EXPECT_LT(ntle::mme_criterion({1, 1, 0}, {1.0, 2.0, 6.0}), 1e-20);
  EXPECT_GT(ntle::mme_criterion({1, 2, 0}, {1.0, 2.0, 6.0}), 1e-3);
}

TEST(Fit, PerfectSampleRecovery) {
  const NtleParams p0(0.8, 1.7, -0.3);
  const Sample s(perfect_sample(p0, 60));
  const auto lse = ntle::fit_lse(s);
  EXPECT_LT(lse.objective, 1e-12);
  EXPECT_NEAR(lse.params.lambda(), p0.lambda(), 1e-3);
  const auto pce = ntle::fit_pce(s);
  EXPECT_LT(pce.objective, 1e-10);
  EXPECT_NEAR(pce.params.beta(), p0.beta(), 1e-3);
  EXPECT_LT(ntle::fit_wlse(s).objective, 1e-10);
  const auto ade = ntle::fit_ade(s);
  EXPECT_NEAR(ade.params.lambda(), p0.lambda(), 0.1);
}

TEST(Fit, EveryMethodReturnsFiniteParams) {
  const Sample s(ntle::sample(kTruth, 100, 17));
  ntle::FitOptions options;
  options.bayes.iterations = 3000;
  options.bayes.burn_in = 1000;
  for (EstimationMethod m : ntle::kAllMethods) {
    const auto fit = ntle::fit(m, s, options);
    EXPECT_EQ(fit.method, m);
    EXPECT_TRUE(std::isfinite(fit.objective)) << ntle::to_string(m);
    EXPECT_TRUE(NtleParams::is_valid(fit.params.lambda(), fit.params.beta(), fit.params.delta()));
    EXPECT_TRUE(fit.converged || !fit.warnings.empty()) << ntle::to_string(m);
    if (m != EstimationMethod::MLE && m != EstimationMethod::BAYES) {
      EXPECT_FALSE(fit.std_error.has_value());
    }
  }
}

TEST(Fit, NonConvergenceIsFlaggedNotThrown) {
  const Sample s(ntle::sample(kTruth, 100, 3));
  ntle::FitOptions options;
  options.optimizer.max_evaluations = 5;
  const auto fit = ntle::fit_lse(s, options);
  EXPECT_FALSE(fit.converged);
  EXPECT_FALSE(fit.warnings.empty());
  EXPECT_TRUE(std::isfinite(fit.objective));
}

TEST(Mle, LargeSampleRecovery) {
  const auto fit = ntle::fit_mle(Sample(ntle::sample(kTruth, 5000, 1)));
  EXPECT_TRUE(fit.converged);
  // Bands of four asymptotic standard deviations at n = 5000.
  EXPECT_NEAR(fit.params.lambda(), 1.0, 4 * 0.085);
  EXPECT_NEAR(fit.params.beta(), 1.5, 4 * 0.021);
  EXPECT_NEAR(fit.params.delta(), 0.5, 4 * 0.173);
  ASSERT_TRUE(fit.std_error.has_value());
  ASSERT_TRUE(fit.ci95.has_value());
  for (int i = 0; i < 3; ++i) {
    EXPECT_GT((*fit.std_error)[i], 0.0);
    EXPECT_NEAR((*fit.ci95)[i].upper - (*fit.ci95)[i].lower,
                2 * 1.959963984540054 * (*fit.std_error)[i], 1e-12);
  }
  EXPECT_NEAR(fit.objective, ntle::log_likelihood(fit.params, Sample(ntle::sample(kTruth, 5000, 1))),
              1e-9);
}

TEST(Mle, ExponentialDataNestedRecovery) {
  const auto fit = ntle::fit_mle(Sample(ntle::sample({1, 1, 0}, 5000, 2)));
  EXPECT_NEAR(fit.params.lambda(), 1.0, 0.2);
  EXPECT_NEAR(fit.params.beta(), 1.0, 0.2);
  EXPECT_NEAR(fit.params.delta(), 0.0, 0.3);
}

TEST(Mle, BeatsTruthAndGridStart) {
  const Sample s(ntle::sample(kTruth, 300, 8));
  const auto fit = ntle::fit_mle(s);
  EXPECT_GE(fit.objective, ntle::log_likelihood(kTruth, s));
  EXPECT_GE(fit.objective, ntle::log_likelihood(ntle::detail::likelihood_grid_start(s), s));
}

TEST(ObservedInformation, ExponentialEntry) {
  const Sample s(ntle::sample({2, 1, 0}, 400, 4));
  const double lambda_hat = 1.0 / s.mean();
  const auto info = ntle::observed_information({lambda_hat, 1, 0}, s);
  EXPECT_NEAR(info.matrix[0][0], 400 / (lambda_hat * lambda_hat),
              1e-6 * 400 / (lambda_hat * lambda_hat));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(info.matrix[i][j], info.matrix[j][i]);
  }
}

TEST(ObservedInformation, StdErrorMatchesSpreadInAsymptoticRegime) {
  const std::size_t n = 5000;
  const int reps = 60;
  std::vector<double> lambdas;
  double se_sum = 0;
  for (int r = 0; r < reps; ++r) {
    const auto fit = ntle::fit_mle(Sample(ntle::sample(kTruth, n, ntle::derive_seed(77, n, r))));
    lambdas.push_back(fit.params.lambda());
    ASSERT_TRUE(fit.std_error.has_value());
    se_sum += (*fit.std_error)[0];
  }
  const double mean = std::accumulate(lambdas.begin(), lambdas.end(), 0.0) / reps;
  double ss = 0;
  for (double l : lambdas) ss += (l - mean) * (l - mean);
  const double sd = std::sqrt(ss / (reps - 1));
  EXPECT_NEAR(se_sum / reps, sd, 0.25 * sd);
}

TEST(Mme, LargeSampleResidual) {
  const auto fit = ntle::fit_mme(Sample(ntle::sample(kTruth, 100000, 12)));
  EXPECT_LT(fit.objective, 1e-3);
  EXPECT_NEAR(ntle::raw_moment(fit.params, 1), 1.0 / 1.0 * ntle::raw_moment(kTruth, 1), 0.02);
}

TEST(Mps, TiesAreRepaired) {
  auto y = ntle::sample(kTruth, 50, 21);
  y[10] = y[11] = y[12];
  const auto fit = ntle::fit_mps(Sample(y));
  EXPECT_TRUE(std::isfinite(fit.objective));
  EXPECT_THROW(ntle::fit_mps(Sample({2.0, 2.0, 2.0, 2.0})), ntle::PreconditionError);
}

TEST(Pce, ScaleEquivariance) {
  auto y = ntle::sample(kTruth, 200, 31);
  const auto base = ntle::fit_pce(Sample(y));
  for (double& v : y) v *= 3.0;
  const auto scaled = ntle::fit_pce(Sample(y));
  EXPECT_NEAR(scaled.params.lambda(), base.params.lambda() / 3.0, 1e-4 * base.params.lambda());
  EXPECT_NEAR(scaled.params.beta(), base.params.beta(), 1e-4);
  EXPECT_NEAR(scaled.params.delta(), base.params.delta(), 1e-4);
}

TEST(Bayes, ConfigValidation) {
  ntle::BayesConfig c;
  c.burn_in = c.iterations;
  EXPECT_THROW(c.validate(), ntle::DomainError);
  c = {};
  c.proposal_scales[1] = 0;
  EXPECT_THROW(c.validate(), ntle::DomainError);
  c = {};
  c.prior_rate_beta = -1;
  EXPECT_THROW(c.validate(), ntle::DomainError);
}

TEST(Bayes, DeterministicChain) {
  const Sample s(ntle::sample(kTruth, 200, 41));
  ntle::BayesConfig c;
  c.seed = 99;
  const auto a = ntle::fit_bayes(s, c);
  const auto b = ntle::fit_bayes(s, c);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.acceptance_rate, b.acceptance_rate);
  c.seed = 100;
  EXPECT_NE(ntle::fit_bayes(s, c).params, a.params);
}

TEST(Bayes, AcceptanceAndLengthInvariance) {
  const Sample s(ntle::sample(kTruth, 500, 43));
  // Monte Carlo error of a posterior mean, estimated from independent chains.
  auto chains = [&](int iterations, std::uint64_t first_seed) {
    constexpr int kChains = 4;
    std::array<std::vector<double>, 3> means;
    for (int c = 0; c < kChains; ++c) {
      ntle::BayesConfig cfg;
      cfg.iterations = iterations;
      cfg.seed = first_seed + c;
      const auto fit = ntle::fit_bayes(s, cfg);
      EXPECT_GE(*fit.acceptance_rate, 0.15);
      EXPECT_LE(*fit.acceptance_rate, 0.5);
      means[0].push_back(fit.params.lambda());
      means[1].push_back(fit.params.beta());
      means[2].push_back(fit.params.delta());
    }
    std::array<std::pair<double, double>, 3> out;
    for (int i = 0; i < 3; ++i) {
      double m = 0, ss = 0;
      for (double x : means[i]) m += x;
      m /= kChains;
      for (double x : means[i]) ss += (x - m) * (x - m);
      out[i] = {m, std::sqrt(ss / (kChains - 1) / kChains)};
    }
    return out;
  };
  const ntle::BayesConfig defaults;
  const auto a = chains(defaults.iterations, 1);
  const auto b = chains(2 * defaults.iterations, 101);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(a[i].first, b[i].first, 3 * std::hypot(a[i].second, b[i].second)) << i;
  }
}

// The delta profile likelihood of this sample has two modes (near 0 and near
// 0.8) within one log-likelihood unit, so the posterior is wide and the
// curvature at the MLE only describes one mode.
TEST(Bayes, AgreesWithMleAtLargeN) {
  const Sample s(ntle::sample(kTruth, 5000, 1));
  const auto mle = ntle::fit_mle(s);
  const auto bayes = ntle::fit_bayes(s, {});
  ASSERT_TRUE(mle.std_error.has_value());
  ASSERT_TRUE(bayes.std_error.has_value());
  const std::array<double, 3> a = {mle.params.lambda(), mle.params.beta(), mle.params.delta()};
  const std::array<double, 3> b = {bayes.params.lambda(), bayes.params.beta(),
                                   bayes.params.delta()};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(b[i], a[i], 2 * (*bayes.std_error)[i]) << i;
  EXPECT_NEAR(b[1], a[1], 2 * (*mle.std_error)[1]);
}

}  // namespace
