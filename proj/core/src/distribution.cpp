#include "ntle/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ntle/error.hpp"
#include "ntle/random.hpp"

namespace ntle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonnegative(double y, const char* what) {
  if (std::isnan(y) || y < 0.0) {
    throw DomainError(std::string(what) + ": y must be >= 0, got " + std::to_string(y));
  }
}

// log(1 + delta - 2 delta v) written as log1p(delta (w - v)).
double log_transmutation_factor(double delta, double v, double w) {
  const double arg = delta * (w - v);
  if (!(arg > -1.0)) {
    throw NumericalError("transmutation factor 1 + delta - 2 delta v is not positive");
  }
  return std::log1p(arg);
}

double logistic(double x) noexcept {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

namespace detail {

double log_expm1(double x) noexcept {
  if (x <= 0.0) {
    return x == 0.0 ? -kInf : std::numeric_limits<double>::quiet_NaN();
  }
  if (x > 30.0) {
    return x + std::log1p(-std::exp(-x));
  }
  return std::log(std::expm1(x));
}

double softplus(double x) noexcept {
  if (x > 0.0) {
    return x + std::log1p(std::exp(-x));
  }
  return std::log1p(std::exp(x));
}

VW vw_from_log_u(double lu) noexcept {
  VW r{};
  if (lu >= 0.0) {
    const double e = std::exp(-lu);
    r.v = 1.0 / (1.0 + e);
    r.w = e / (1.0 + e);
  } else {
    const double e = std::exp(lu);
    r.v = e / (1.0 + e);
    r.w = 1.0 / (1.0 + e);
  }
  r.log_v = -softplus(-lu);
  r.log_w = -softplus(lu);
  return r;
}

double log_u(const NtleParams& p, double y) noexcept {
  return p.beta() * log_expm1(p.lambda() * y);
}

double y_from_v(const NtleParams& p, double v) noexcept {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return kInf;
  const double lu = std::log(v) - std::log1p(-v);
  return softplus(lu / p.beta()) / p.lambda();
}

double log_pdf_from_v(const NtleParams& p, double v) noexcept {
  const double beta = p.beta();
  const double delta = p.delta();
  const double lu = std::log(v) - std::log1p(-v);
  const double w = 1.0 - v;
  return std::log(beta * p.lambda()) + softplus(lu / beta) + (beta - 1.0) / beta * lu +
         std::log1p(delta * (w - v)) + 2.0 * std::log1p(-v);
}

}  // namespace detail

double log_pdf(const NtleParams& p, double y) {
  require_nonnegative(y, "log_pdf");
  if (y == 0.0) {
    return std::log(pdf(p, 0.0));
  }
  const double x = p.lambda() * y;
  const double lx = detail::log_expm1(x);
  const auto vw = detail::vw_from_log_u(p.beta() * lx);
  const double result = std::log(p.beta()) + std::log(p.lambda()) + x + (p.beta() - 1.0) * lx +
                        log_transmutation_factor(p.delta(), vw.v, vw.w) + 2.0 * vw.log_w;
  if (!std::isfinite(result)) {
    throw NumericalError("log_pdf is not finite at y=" + std::to_string(y));
  }
  return result;
}

double pdf(const NtleParams& p, double y) {
  require_nonnegative(y, "pdf");
  if (y == 0.0) {
    if (p.beta() > 1.0) return 0.0;
    if (p.beta() < 1.0) return kInf;
    return p.lambda() * (1.0 + p.delta());
  }
  return std::exp(log_pdf(p, y));
}

double cdf(const NtleParams& p, double y) {
  require_nonnegative(y, "cdf");
  if (y == 0.0) return 0.0;
  const double lu = detail::log_u(p, y);
  if (lu >= 0.0) {
    const double e = std::exp(-lu);
    return 1.0 - e * (1.0 + e - p.delta()) / ((1.0 + e) * (1.0 + e));
  }
  const auto vw = detail::vw_from_log_u(lu);
  return vw.v * (1.0 + p.delta() * vw.w);
}

double survival(const NtleParams& p, double y) {
  require_nonnegative(y, "survival");
  if (y == 0.0) return 1.0;
  const auto vw = detail::vw_from_log_u(detail::log_u(p, y));
  return vw.w * (1.0 - p.delta() * vw.v);
}

double log_cdf(const NtleParams& p, double y) {
  require_nonnegative(y, "log_cdf");
  if (y == 0.0) return -kInf;
  const auto vw = detail::vw_from_log_u(detail::log_u(p, y));
  return vw.log_v + std::log1p(p.delta() * vw.w);
}

double log_survival(const NtleParams& p, double y) {
  require_nonnegative(y, "log_survival");
  if (y == 0.0) return 0.0;
  const auto vw = detail::vw_from_log_u(detail::log_u(p, y));
  return vw.log_w + std::log1p(-p.delta() * vw.v);
}

double hazard(const NtleParams& p, double y) {
  require_nonnegative(y, "hazard");
  if (y == 0.0) return pdf(p, 0.0);
  if (survival(p, y) == 0.0) {
    throw TailOverflowError("hazard: survival underflows to 0 at y=" + std::to_string(y));
  }
  return std::exp(log_pdf(p, y) - log_survival(p, y));
}

UCoord to_u(const NtleParams& p, double y) {
  require_nonnegative(y, "to_u");
  if (y == 0.0) return UCoord(0.0);
  return UCoord(std::exp(detail::log_u(p, y)));
}

double from_u(const NtleParams& p, UCoord u) {
  if (u.value() == 0.0) return 0.0;
  return detail::softplus(std::log(u.value()) / p.beta()) / p.lambda();
}

double quantile(const NtleParams& p, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw DomainError("quantile: probability must lie in (0, 1), got " + std::to_string(prob));
  }
  const double a = 1.0 - prob;
  const double b = 1.0 + p.delta() - 2.0 * prob;
  const double disc = std::sqrt(b * b + 4.0 * a * prob);
  // Positive root; the conjugate form avoids cancellation when b > 0.
  const double u = b > 0.0 ? 2.0 * prob / (b + disc) : (disc - b) / (2.0 * a);
  return detail::softplus(std::log(u) / p.beta()) / p.lambda();
}

std::vector<double> sample(const NtleParams& p, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& y : out) {
    y = quantile(p, rng.uniform());
  }
  return out;
}

std::string_view to_string(ModeKind kind) noexcept {
  switch (kind) {
    case ModeKind::boundary_at_zero:
      return "boundary_at_zero";
    case ModeKind::interior:
      return "interior";
    case ModeKind::unbounded_at_zero:
      return "unbounded_at_zero";
  }
  return "unknown";
}

namespace {

// x times the derivative of log g(y(x)) with respect to x, x = e^{lambda y} - 1.
// Same sign as the modal equation; written with logistic terms so that large
// x^beta does not overflow.
double scaled_modal_equation(double log_x, double beta, double delta) {
  const double x_over_1px = logistic(log_x);
  const double s1 = logistic(beta * log_x + std::log((1.0 - delta) / (1.0 + delta)));
  const double s2 = logistic(beta * log_x);
  return x_over_1px + (beta - 1.0) + beta * s1 - 3.0 * beta * s2;
}

}  // namespace

ModeResult mode(const NtleParams& p) {
  const double beta = p.beta();
  const double delta = p.delta();
  const double lambda = p.lambda();
  if (beta < 1.0) {
    return {0.0, ModeKind::unbounded_at_zero};
  }
  if (beta == 1.0) {
    if (delta < -1.0 / 3.0) {
      return {std::log(-4.0 * delta / (1.0 - delta)) / lambda, ModeKind::interior};
    }
    return {0.0, ModeKind::boundary_at_zero};
  }

  const double lo = std::log(1e-12);
  const double hi = std::log(1e12);
  constexpr int kGrid = 480;
  double best_y = -1.0;
  double best_logpdf = -kInf;
  double prev_x = lo;
  double prev_f = scaled_modal_equation(prev_x, beta, delta);
  for (int i = 1; i <= kGrid; ++i) {
    const double cur_x = lo + (hi - lo) * i / kGrid;
    const double cur_f = scaled_modal_equation(cur_x, beta, delta);
    if (prev_f > 0.0 && cur_f <= 0.0) {
      double a = prev_x;
      double b = cur_x;
      // Bisection in log x; relative accuracy 1e-12 in x is |b - a| < 1e-12.
      for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        const double mid = 0.5 * (a + b);
        if (scaled_modal_equation(mid, beta, delta) > 0.0) {
          a = mid;
        } else {
          b = mid;
        }
      }
      const double log_x = 0.5 * (a + b);
      const double y = std::log1p(std::exp(log_x)) / lambda;
      const double lp = log_pdf(p, y);
      if (lp > best_logpdf) {
        best_logpdf = lp;
        best_y = y;
      }
    }
    prev_x = cur_x;
    prev_f = cur_f;
  }
  if (best_y < 0.0) {
    throw NumericalError("mode: modal equation has no sign change on x in [1e-12, 1e12] for " +
                         p.to_string());
  }
  return {best_y, ModeKind::interior};
}

}  // namespace ntle
