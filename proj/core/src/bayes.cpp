#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ntle/error.hpp"
#include "ntle/estimation.hpp"
#include "ntle/random.hpp"

namespace ntle {

namespace {

constexpr int kAdaptBatch = 50;
constexpr double kTargetAcceptance = 0.3;
constexpr double kMinAcceptance = 0.05;
constexpr double kMaxAcceptance = 0.7;

// Type-7 sample quantile of sorted data.
double sorted_quantile(const std::vector<double>& sorted, double prob) {
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

class Posterior {
 public:
  Posterior(const Sample& s, const BayesConfig& c) : sample_(s), c_(c) {}

  // Log posterior density of z = (ln lambda, ln beta, atanh delta), including
  // the Jacobians of the log transforms.
  double log_density(const std::array<double, 3>& z) const {
    const double lambda = std::exp(z[0]);
    const double beta = std::exp(z[1]);
    const double delta = std::tanh(z[2]);
    if (!NtleParams::is_valid(lambda, beta, delta)) {
      return -std::numeric_limits<double>::infinity();
    }
    const double ll = log_likelihood(NtleParams(lambda, beta, delta), sample_);
    return ll + c_.prior_shape_lambda * z[0] - c_.prior_rate_lambda * lambda +
           c_.prior_shape_beta * z[1] - c_.prior_rate_beta * beta - 0.5 * z[2] * z[2];
  }

 private:
  const Sample& sample_;
  const BayesConfig& c_;
};

}  // namespace

void BayesConfig::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw DomainError(std::string("bayes: ") + name + " must be finite and > 0");
    }
  };
  positive(prior_shape_lambda, "prior_shape_lambda");
  positive(prior_rate_lambda, "prior_rate_lambda");
  positive(prior_shape_beta, "prior_shape_beta");
  positive(prior_rate_beta, "prior_rate_beta");
  for (double scale : proposal_scales) positive(scale, "proposal_scales");
  if (burn_in < 0) throw DomainError("bayes: burn_in must be >= 0");
  if (!(burn_in < iterations)) throw DomainError("bayes: burn_in must be < iterations");
}

FitResult fit_bayes(const Sample& s, const BayesConfig& config) {
  config.validate();
  const Posterior posterior(s, config);
  Rng rng(config.seed);

  const NtleParams start = detail::likelihood_grid_start(s);
  std::array<double, 3> z = {std::log(start.lambda()), std::log(start.beta()),
                             std::atanh(start.delta())};
  double current = posterior.log_density(z);
  std::array<double, 3> scale = config.proposal_scales;

  std::array<int, 3> batch_accepts{};
  int batches = 0;
  long kept_accepts = 0;
  const auto kept = static_cast<std::size_t>(config.iterations - config.burn_in);
  std::array<std::vector<double>, 3> draws;
  for (auto& d : draws) d.reserve(kept);

  for (int t = 0; t < config.iterations; ++t) {
    const bool burning = t < config.burn_in;
    for (int c = 0; c < 3; ++c) {
      auto proposal = z;
      proposal[c] += scale[c] * rng.normal();
      const double candidate = posterior.log_density(proposal);
      if (std::log(rng.uniform()) < candidate - current) {
        z = proposal;
        current = candidate;
        if (burning) {
          ++batch_accepts[c];
        } else {
          ++kept_accepts;
        }
      }
    }
    if (burning && config.adapt && (t + 1) % kAdaptBatch == 0) {
      ++batches;
      const double gain = std::min(1.0, 3.0 / std::sqrt(static_cast<double>(batches)));
      for (int c = 0; c < 3; ++c) {
        const double rate = static_cast<double>(batch_accepts[c]) / kAdaptBatch;
        scale[c] *= std::exp(gain * (rate - kTargetAcceptance));
        batch_accepts[c] = 0;
      }
    }
    if (!burning) {
      draws[0].push_back(std::exp(z[0]));
      draws[1].push_back(std::exp(z[1]));
      draws[2].push_back(std::tanh(z[2]));
    }
  }

  std::array<double, 3> mean{};
  std::array<double, 3> sd{};
  std::array<Interval, 3> ci{};
  for (int c = 0; c < 3; ++c) {
    auto& d = draws[c];
    double sum = 0.0;
    for (double x : d) sum += x;
    mean[c] = sum / static_cast<double>(d.size());
    double ss = 0.0;
    for (double x : d) ss += (x - mean[c]) * (x - mean[c]);
    sd[c] = d.size() > 1 ? std::sqrt(ss / static_cast<double>(d.size() - 1)) : 0.0;
    std::sort(d.begin(), d.end());
    ci[c] = {sorted_quantile(d, 0.025), sorted_quantile(d, 0.975)};
  }

  const double acceptance = static_cast<double>(kept_accepts) / (3.0 * static_cast<double>(kept));
  const NtleParams estimate(mean[0], mean[1], mean[2]);
  FitResult out{estimate, EstimationMethod::BAYES, log_likelihood(estimate, s), true,
                config.iterations, std::nullopt, ci, {}, acceptance, {}};
  if (std::all_of(sd.begin(), sd.end(), [](double x) { return x > 0.0; })) {
    out.std_error = sd;
  }
  if (acceptance < kMinAcceptance || acceptance > kMaxAcceptance) {
    std::ostringstream os;
    os << "BAYES: acceptance rate " << acceptance << " outside [" << kMinAcceptance << ", "
       << kMaxAcceptance << "]";
    out.warnings.push_back(os.str());
    out.converged = false;
  }
  return out;
}

}  // namespace ntle
