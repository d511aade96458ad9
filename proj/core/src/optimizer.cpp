#include "ntle/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ntle/error.hpp"

namespace ntle {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

class Simplex {
 public:
  Simplex(const std::function<double(std::span<const double>)>& f, int budget)
      : f_(f), budget_(budget) {}

  double eval(const std::vector<double>& x) {
    ++evaluations_;
    const double v = f_(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }

  bool exhausted() const { return evaluations_ >= budget_; }
  int evaluations() const { return evaluations_; }

 private:
  const std::function<double(std::span<const double>)>& f_;
  int budget_;
  int evaluations_ = 0;
};

bool simplex_converged(const std::vector<Vertex>& s, const NelderMeadOptions& o) {
  const double fbest = s.front().f;
  const double fworst = s.back().f;
  if (!std::isfinite(fworst)) return false;
  if (fworst - fbest > o.f_abs_tol + o.f_rel_tol * std::abs(fbest)) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s[i].x.size(); ++j) {
      if (std::abs(s[i].x[j] - s.front().x[j]) > o.x_tol) return false;
    }
  }
  return true;
}

}  // namespace

OptimizeResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                           std::vector<double> x0, const NelderMeadOptions& o) {
  const std::size_t dim = x0.size();
  if (dim == 0) {
    throw DomainError("nelder_mead: empty parameter vector");
  }
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  Simplex evaluator(f, o.max_evaluations);
  std::vector<Vertex> s;
  bool converged = false;

  auto build = [&](std::vector<double> center, double step) {
    s.clear();
    s.push_back({center, evaluator.eval(center)});
    for (std::size_t i = 0; i < dim; ++i) {
      auto x = center;
      x[i] += step;
      s.push_back({x, evaluator.eval(x)});
    }
  };
  auto order = [&] {
    std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };

  build(x0, o.initial_step);
  for (int round = 0; round <= o.restarts; ++round) {
    if (round > 0) {
      build(s.front().x, o.initial_step * 0.1);
    }
    converged = false;
    while (!evaluator.exhausted()) {
      order();
      if (simplex_converged(s, o)) {
        converged = true;
        break;
      }
      std::vector<double> centroid(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) centroid[j] += s[i].x[j];
      }
      for (double& c : centroid) c /= static_cast<double>(dim);

      auto along = [&](double t) {
        std::vector<double> x(dim);
        for (std::size_t j = 0; j < dim; ++j) x[j] = centroid[j] + t * (s.back().x[j] - centroid[j]);
        return x;
      };

      auto xr = along(-kReflect);
      const double fr = evaluator.eval(xr);
      if (fr < s.front().f) {
        auto xe = along(-kExpand);
        const double fe = evaluator.eval(xe);
        s.back() = fe < fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
        continue;
      }
      if (fr < s[dim - 1].f) {
        s.back() = {std::move(xr), fr};
        continue;
      }
      const bool outside = fr < s.back().f;
      auto xc = along(outside ? -kContract : kContract);
      const double fc = evaluator.eval(xc);
      if (fc < std::min(fr, s.back().f)) {
        s.back() = {std::move(xc), fc};
        continue;
      }
      for (std::size_t i = 1; i <= dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          s[i].x[j] = s[0].x[j] + kShrink * (s[i].x[j] - s[0].x[j]);
        }
        s[i].f = evaluator.eval(s[i].x);
      }
    }
    order();
    if (!converged) break;
  }

  return {s.front().x, s.front().f, evaluator.evaluations(), converged && std::isfinite(s.front().f)};
}

}  // namespace ntle
