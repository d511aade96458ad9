#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ntle {

struct NelderMeadOptions {
  int max_evaluations = 5000;
  /// Stop when the spread of simplex values is below f_abs_tol + f_rel_tol * |f_best| ...
  double f_abs_tol = 1e-10;
  double f_rel_tol = 1e-10;
  /// ... and every vertex is within x_tol of the best one (infinity norm).
  double x_tol = 1e-6;
  double initial_step = 0.25;
  /// Rebuild the simplex around the converged point this many times.
  int restarts = 1;
};

struct OptimizeResult {
  std::vector<double> x;
  double value;
  int evaluations;
  bool converged;
};

/// Derivative-free Nelder-Mead minimisation. Non-finite objective values are
/// treated as +infinity, so infeasible points are simply rejected.
OptimizeResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                           std::vector<double> x0, const NelderMeadOptions& options = {});

}  // namespace ntle
