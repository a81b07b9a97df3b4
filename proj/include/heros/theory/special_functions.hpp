#pragma once

// Beta-distribution helpers: regularized incomplete beta function via the
// continued-fraction expansion (modified Lentz), and the conditional tail
// mean E(X | X >= q) built from it.

#include <cmath>
#include <limits>

#include "heros/errors.hpp"

namespace heros::theory {

inline double beta_mean(double alpha, double beta) { return alpha / (alpha + beta); }

inline double beta_variance(double alpha, double beta) {
  const double s = alpha + beta;
  return alpha * beta / (s * s * (s + 1.0));
}

namespace detail {

inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double eps = 3e-16;
  constexpr double tiny = 1e-300;
  constexpr int max_iter = 300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

// I_x(a, b): P(X <= x) for X ~ Beta(a, b).
inline double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidFit("beta shape parameters must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// E(X | X >= q) for X ~ Beta(alpha, beta).
inline double beta_tail_mean(double alpha, double beta, double q) {
  if (q <= 0.0) return beta_mean(alpha, beta);
  if (q >= 1.0) return 1.0;
  const double tail = 1.0 - reg_inc_beta(alpha, beta, q);
  if (tail <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double partial = 1.0 - reg_inc_beta(alpha + 1.0, beta, q);
  return beta_mean(alpha, beta) * partial / tail;
}

}  // namespace heros::theory
