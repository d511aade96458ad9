#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

namespace {

constexpr double kTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double y_at_u(const Params& p, double target) {
  return std::log1p(std::pow(target, 1.0 / p.beta)) / p.lambda;
}

std::vector<double> split_points(const Params& p) {
  return {y_at_u(p, 1e-3), y_at_u(p, 1.0), y_at_u(p, 1e3)};
}

double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts,
                        double a, double b) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  double lo = a;
  for (double c : cuts) {
    if (c <= lo || c > b) continue;
    total += integrate(f, lo, c);
    lo = c;
  }
  return total;
}

}  // namespace

double u(const Params& p, double y) { return std::pow(std::expm1(p.lambda * y), p.beta); }

double pdf(const Params& p, double y) {
  const double ly = p.lambda * y;
  if (ly > 700.0) return 0.0;
  const double x = std::expm1(ly);
  const double uu = std::pow(x, p.beta);
  if (!std::isfinite(uu)) return 0.0;
  const double g = p.beta * p.lambda * std::exp(ly) * std::pow(x, p.beta - 1.0) *
                   ((1.0 + p.delta + (1.0 - p.delta) * uu) / (1.0 + uu)) /
                   ((1.0 + uu) * (1.0 + uu));
  return std::isfinite(g) ? g : 0.0;
}

double cdf(const Params& p, double y) {
  const double uu = u(p, y);
  if (!std::isfinite(uu)) return 1.0;
  return uu * (1.0 + p.delta + uu) / ((1.0 + uu) * (1.0 + uu));
}

double survival(const Params& p, double y) {
  const double uu = u(p, y);
  if (!std::isfinite(uu)) return 0.0;
  return (1.0 + (1.0 - p.delta) * uu) / ((1.0 + uu) * (1.0 + uu));
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate(f, a, kInf, kTol);
  }
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, kTol);
}

double integrate_support(const Params& p, const std::function<double(double)>& f) {
  return integrate_pieces(f, split_points(p), 0.0, kInf);
}

double shannon_entropy(const Params& p) {
  return integrate_support(p, [&](double y) {
    const double g = pdf(p, y);
    return g > 0.0 ? -g * std::log(g) : 0.0;
  });
}

double power_integral(const Params& p, double rho) {
  return integrate_support(p, [&](double y) { return std::pow(pdf(p, y), rho); });
}

static double moment_integrand(const Params& p, int k, double y) {
  const double g = pdf(p, y);
  return g > 0.0 ? std::pow(y, k) * g : 0.0;
}

double raw_moment(const Params& p, int k) {
  return integrate_support(p, [&](double y) { return moment_integrand(p, k, y); });
}

double incomplete_moment(const Params& p, int k, double t) {
  return integrate_pieces([&](double y) { return moment_integrand(p, k, y); }, split_points(p),
                          0.0, t);
}

double mean_residual_life(const Params& p, double t) {
  const double tail =
      integrate_pieces([&](double y) { return survival(p, y); }, split_points(p), t, kInf);
  return tail / survival(p, t);
}

double reversed_residual_life(const Params& p, double t) {
  const double head =
      integrate_pieces([&](double y) { return cdf(p, y); }, split_points(p), 0.0, t);
  return head / cdf(p, t);
}

double k_delta(double delta) {
  return integrate(
      [&](double v) {
        const double t = 1.0 + delta - 2.0 * delta * v;
        return t * std::log(t);
      },
      0.0, 1.0);
}

double stress_strength(const Params& strength, const Params& stress) {
  auto cuts = split_points(strength);
  const auto more = split_points(stress);
  cuts.insert(cuts.end(), more.begin(), more.end());
  return integrate_pieces(
      [&](double y) {
        const double g = pdf(strength, y);
        return g > 0.0 ? cdf(stress, y) * g : 0.0;
      },
      cuts, 0.0, kInf);
}

std::vector<double> sample(const Params& p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double target = unif(engine);
    if (target <= 0.0) continue;
    double lo = 0.0;
    double hi = 1.0 / p.lambda;
    while (cdf(p, hi) < target) hi *= 2.0;
    while (hi - lo > 1e-14 * hi) {
      const double mid = 0.5 * (lo + hi);
      (cdf(p, mid) < target ? lo : hi) = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::vector<Params> parameter_grid() {
  std::vector<Params> grid;
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double beta : {0.5, 1.0, 1.5, 3.0}) {
      for (double delta : {-0.9, -0.5, 0.0, 0.5, 0.9}) grid.push_back({lambda, beta, delta});
    }
  }
  return grid;
}

}  // namespace oracle
