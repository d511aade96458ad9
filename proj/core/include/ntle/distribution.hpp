#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ntle/params.hpp"

// Pointwise functions of the transmuted logistic-exponential distribution
//
//   G(y) = u (1 + delta + u) / (1 + u)^2,   u = (e^{lambda y} - 1)^beta.
//
// Everything is evaluated through log u and the pair v = u/(1+u),
// w = 1/(1+u) (v + w = 1), so that
//
//   G = v (1 + delta w),   S = w (1 - delta v),
//   g = beta lambda e^{lambda y} (e^{lambda y}-1)^{beta-1} (1 + delta - 2 delta v) w^2.
//
// This keeps the CDF, survival and density accurate for tiny lambda*y
// (no cancellation in e^{lambda y} - 1) and for huge lambda*y (no overflow of u).

namespace ntle {

/// Density. y = 0 returns the y -> 0+ limit: 0 for beta > 1, lambda(1+delta)
/// for beta = 1 and +infinity ("unbounded") for beta < 1.
/// Throws DomainError for y < 0.
double pdf(const NtleParams& p, double y);

/// Log-density computed in log space. y = 0 returns log of the pdf limit
/// (+infinity when beta < 1, -infinity when beta > 1). Throws DomainError for
/// y < 0 and NumericalError if the transmutation factor is not positive.
double log_pdf(const NtleParams& p, double y);

double cdf(const NtleParams& p, double y);
double survival(const NtleParams& p, double y);
double log_cdf(const NtleParams& p, double y);
double log_survival(const NtleParams& p, double y);

/// pdf/survival. Throws TailOverflowError when the survival underflows to 0.
double hazard(const NtleParams& p, double y);

UCoord to_u(const NtleParams& p, double y);
double from_u(const NtleParams& p, UCoord u);

/// Inverse CDF from the positive root of
/// (1 - prob) u^2 + (1 + delta - 2 prob) u - prob = 0. prob must be in (0, 1).
double quantile(const NtleParams& p, double prob);

/// prob -> quantile(p, prob) for n independent open-interval uniforms drawn
/// from Rng(seed).
std::vector<double> sample(const NtleParams& p, std::size_t n, std::uint64_t seed);

enum class ModeKind { boundary_at_zero, interior, unbounded_at_zero };

std::string_view to_string(ModeKind kind) noexcept;

struct ModeResult {
  double location;
  ModeKind kind;
};

/// beta < 1: unbounded at zero. beta = 1: closed form (interior iff
/// delta < -1/3). beta > 1: root of the modal equation in x = e^{lambda y} - 1,
/// bracketed on a geometric grid over [1e-12, 1e12] and bisected.
/// Throws NumericalError if no bracket is found.
ModeResult mode(const NtleParams& p);

namespace detail {

/// log(e^x - 1) for x > 0 without overflow or cancellation.
double log_expm1(double x) noexcept;
/// log(1 + e^x).
double softplus(double x) noexcept;

/// The (v, w) pair and their logs for a given log u.
struct VW {
  double v;
  double w;
  double log_v;
  double log_w;
};
VW vw_from_log_u(double log_u) noexcept;

/// beta * log(e^{lambda y} - 1); -infinity at y = 0.
double log_u(const NtleParams& p, double y) noexcept;

/// y as a function of v = G-coordinate of the baseline logistic part,
/// y(v) = log(1 + (v/(1-v))^{1/beta}) / lambda.
double y_from_v(const NtleParams& p, double v) noexcept;

/// log g expressed in v (the same density, reparametrised by v in (0, 1)).
double log_pdf_from_v(const NtleParams& p, double v) noexcept;

}  // namespace detail

}  // namespace ntle
