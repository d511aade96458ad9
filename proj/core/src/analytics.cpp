#include "ntle/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "ntle/distribution.hpp"
#include "ntle/error.hpp"

namespace ntle {

namespace {

using detail::softplus;

double weight(double delta, double v) { return 1.0 + delta - 2.0 * delta * v; }

// 1 / ((1 + u^{1/beta}) u^{(beta-1)/beta}) for log u = lu; this is dy/du * beta * lambda.
double inverse_jacobian(double lu, double beta) {
  return std::exp(-softplus(lu / beta) - (1.0 - 1.0 / beta) * lu);
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

void require_order(int k) {
  if (k < 1) {
    throw DomainError("moment order must be >= 1, got " + std::to_string(k));
  }
}

// A point of the v-domain carrying its complement w = 1 - v and
// logit = log(v/w) without cancellation.
struct VPoint {
  double v;
  double w;
  double logit;
};

// Integrates h over v in (v_lo, v_hi); the complements are passed alongside.
// Above v = 1/2 the variable is switched to w = 1 - v, so a singularity at
// v = 1 is resolved at w = 0 where doubles keep full relative precision.
double integrate_v(const std::function<double(const VPoint&)>& h, double v_lo, double w_lo,
                   double v_hi, double w_hi, const QuadratureSpec& q) {
  double total = 0.0;
  if (v_lo < 0.5) {
    auto lower = [&](double v) { return h({v, 1.0 - v, std::log(v) - std::log1p(-v)}); };
    total += integrate(lower, v_lo, std::min(v_hi, 0.5), q).value;
  }
  if (v_hi > 0.5) {
    auto upper = [&](double w) { return h({1.0 - w, w, std::log1p(-w) - std::log(w)}); };
    total += integrate(upper, w_hi, std::min(w_lo, 0.5), q).value;
  }
  return total;
}

double y_from_logit(const NtleParams& p, double logit) {
  return softplus(logit / p.beta()) / p.lambda();
}

double log_pdf_at(const NtleParams& p, const VPoint& x) {
  const double beta = p.beta();
  return std::log(beta * p.lambda()) + softplus(x.logit / beta) + (beta - 1.0) / beta * x.logit +
         std::log1p(p.delta() * (x.w - x.v)) + 2.0 * std::log(x.w);
}

detail::VW vw_of(const NtleParams& p, double y) { return detail::vw_from_log_u(detail::log_u(p, y)); }

double moment_integral(const NtleParams& p, int k, double v_hi, double w_hi,
                       const QuadratureSpec& q) {
  auto integrand = [&](const VPoint& x) {
    return std::pow(y_from_logit(p, x.logit), k) * weight(p.delta(), x.v);
  };
  return integrate_v(integrand, 0.0, 1.0, v_hi, w_hi, q);
}

}  // namespace

double k_delta(double delta) {
  if (!(delta > -1.0 && delta < 1.0)) {
    throw DomainError("k_delta: delta must lie in (-1, 1)");
  }
  if (std::abs(delta) < 1e-3) {
    // sum_{k>=1} delta^{2k} / ((2k)(2k-1)(2k+1)); next term is below 1e-26.
    const double d2 = delta * delta;
    return d2 / 6.0 + d2 * d2 / 60.0 + d2 * d2 * d2 / 210.0;
  }
  const double a = 1.0 + delta;
  const double b = 1.0 - delta;
  return (a * a * std::log(a) - b * b * std::log(b)) / (4.0 * delta) - 0.5;
}

EntropyResult shannon_entropy(const NtleParams& p, const QuadratureSpec& q) {
  const double beta = p.beta();
  const double delta = p.delta();
  auto integrand = [&](const VPoint& x) { return weight(delta, x.v) * softplus(x.logit / beta); };
  const double j = integrate_v(integrand, 0.0, 1.0, 1.0, 0.0, q);
  const double k = k_delta(delta);
  const double h = 2.0 - std::log(beta * p.lambda()) - delta / beta - j - k;
  return {h, j, k};
}

double renyi_entropy_integer(const NtleParams& p, int m) {
  if (m < 2) {
    throw DomainError("renyi_entropy_integer: order must be an integer >= 2");
  }
  const double beta = p.beta();
  const double delta = p.delta();
  double sum = 0.0;
  for (int j = 0; j <= m - 1; ++j) {
    for (int k = 0; k <= m; ++k) {
      const double shift = ((m - 1) * (beta - 1.0) + j) / beta;
      const double a = 1.0 + k + shift;
      const double b = 3.0 * m - 1.0 - k - shift;
      if (!(a > 0.0) || !(b > 0.0)) {
        std::ostringstream os;
        os << "renyi_entropy_integer: beta-function argument not positive at (j=" << j
           << ", k=" << k << "): B(" << a << ", " << b << ")";
        throw PreconditionError(os.str());
      }
      const double log_binom = std::lgamma(m) - std::lgamma(j + 1.0) - std::lgamma(m - j) +
                               std::lgamma(m + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(m - k + 1.0);
      const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
      const double coef = std::pow(1.0 + delta, m - k) * std::pow(1.0 - delta, k);
      sum += coef * std::exp(log_binom + log_beta);
    }
  }
  return ((m - 1) * std::log(beta * p.lambda()) + std::log(sum)) / (1.0 - m);
}

double renyi_entropy_numeric(const NtleParams& p, double rho, const QuadratureSpec& q) {
  if (!(rho > 0.0) || rho == 1.0 || !std::isfinite(rho)) {
    throw DomainError("renyi_entropy_numeric: order must be > 0 and != 1");
  }
  // g ~ y^{beta-1} near the origin, so g^rho is integrable iff rho(beta-1) > -1.
  if (!(rho * (p.beta() - 1.0) > -1.0)) {
    std::ostringstream os;
    os << "renyi_entropy_numeric: integral of g^rho diverges at y=0 (rho(beta-1) = "
       << rho * (p.beta() - 1.0) << " <= -1)";
    throw DivergenceError(os.str());
  }
  // g^rho dy = g^{rho-1} * (1 + delta - 2 delta v) dv
  auto integrand = [&](const VPoint& x) {
    return std::exp((rho - 1.0) * log_pdf_at(p, x)) * weight(p.delta(), x.v);
  };
  const double integral = integrate_v(integrand, 0.0, 1.0, 1.0, 0.0, q);
  return std::log(integral) / (1.0 - rho);
}

double raw_moment(const NtleParams& p, int k, const QuadratureSpec& q) {
  require_order(k);
  return moment_integral(p, k, 1.0, 0.0, q);
}

double incomplete_moment(const NtleParams& p, int k, double t, const QuadratureSpec& q) {
  require_order(k);
  if (std::isnan(t) || t < 0.0) {
    throw DomainError("incomplete_moment: t must be >= 0");
  }
  if (t == 0.0) return 0.0;
  const auto vw = vw_of(p, t);
  return moment_integral(p, k, vw.v, vw.w, q);
}

double mean_residual_life(const NtleParams& p, double t, const QuadratureSpec& q) {
  if (std::isnan(t) || t < 0.0) {
    throw DomainError("mean_residual_life: t must be >= 0");
  }
  const double s_t = survival(p, t);
  if (!(s_t > 1e-300)) {
    throw TailOverflowError("mean_residual_life: survival at t=" + std::to_string(t) +
                            " is below 1e-300");
  }
  const double beta = p.beta();
  const double delta = p.delta();
  const auto vw = vw_of(p, t);
  // (1 + (1-delta) u)/(1+u)^2 du  =  (1 - delta + delta w)/w dv
  auto integrand = [&](const VPoint& x) {
    return (1.0 - delta + delta * x.w) / x.w * inverse_jacobian(x.logit, beta);
  };
  const double integral = integrate_v(integrand, vw.v, vw.w, 1.0, 0.0, q);
  return integral / (beta * p.lambda() * s_t);
}

double reversed_residual_life(const NtleParams& p, double t, const QuadratureSpec& q) {
  if (std::isnan(t) || !(t > 0.0)) {
    throw DomainError("reversed_residual_life: t must be > 0");
  }
  const double g_t = cdf(p, t);
  if (!(g_t > 0.0)) {
    throw NumericalError("reversed_residual_life: cdf underflows at t=" + std::to_string(t));
  }
  const double beta = p.beta();
  const double delta = p.delta();
  const auto vw = vw_of(p, t);
  // u(1+delta+u)/(1+u)^2 du  =  v (1 + delta w) / w^2 dv
  auto integrand = [&](const VPoint& x) {
    return x.v * (1.0 + delta * x.w) / (x.w * x.w) * inverse_jacobian(x.logit, beta);
  };
  const double integral = integrate_v(integrand, 0.0, 1.0, vw.v, vw.w, q);
  return integral / (beta * p.lambda() * g_t);
}

CurvePoint lorenz_curve(const NtleParams& params, double prob, const QuadratureSpec& q) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw DomainError("lorenz_curve: p must lie in (0, 1)");
  }
  const double partial = incomplete_moment(params, 1, quantile(params, prob), q);
  return {prob, partial / raw_moment(params, 1, q)};
}

CurvePoint bonferroni_curve(const NtleParams& params, double prob, const QuadratureSpec& q) {
  const CurvePoint lorenz = lorenz_curve(params, prob, q);
  return {prob, lorenz.value / prob};
}

double stress_strength_integral(const NtleParams& strength, const NtleParams& stress,
                                const QuadratureSpec& q) {
  // Integrate over the strength variable's v-coordinate, where its
  // probability element is (1 + delta - 2 delta v) dv.
  auto integrand = [&](const VPoint& x) {
    return cdf(stress, y_from_logit(strength, x.logit)) * weight(strength.delta(), x.v);
  };
  return integrate_v(integrand, 0.0, 1.0, 1.0, 0.0, q);
}

double stress_strength(const NtleParams& strength, const NtleParams& stress,
                       const QuadratureSpec& q) {
  if (nearly_equal(strength.lambda(), stress.lambda()) &&
      nearly_equal(strength.beta(), stress.beta())) {
    return 0.5 + (stress.delta() - strength.delta()) / 6.0;
  }
  return stress_strength_integral(strength, stress, q);
}

std::string_view to_string(OrderingBasis basis) noexcept {
  return basis == OrderingBasis::sufficient_condition ? "sufficient_condition"
                                                      : "numerical_evidence";
}

OrderingResult stochastically_leq(const NtleParams& p1, const NtleParams& p2) {
  if (!nearly_equal(p1.beta(), p2.beta())) {
    throw PreconditionError("stochastically_leq: both distributions must share beta");
  }
  if (p1.lambda() >= p2.lambda() && p1.delta() >= p2.delta()) {
    return {true, OrderingBasis::sufficient_condition};
  }
  constexpr int kGrid = 10000;
  const double upper = std::max(quantile(p1, 1.0 - 1e-9), quantile(p2, 1.0 - 1e-9));
  bool holds = true;
  for (int i = 1; i <= kGrid && holds; ++i) {
    const double y = upper * i / kGrid;
    holds = cdf(p1, y) >= cdf(p2, y) - 1e-15;
  }
  return {holds, OrderingBasis::numerical_evidence};
}

}  // namespace ntle
