#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "qproots/errors.hpp"

namespace qproots {

/// Solution of x e^x = t or x^2 e^x = t on the nonnegative axis.
struct LambertSolution {
  double x = 0.0;
  double t = 0.0;
  double residual = 0.0;  // x^k e^x - t, measured in the original (non-log) form
  int iterations = 0;
};

/// ln t - ln ln t, the leading-order asymptotic of the x e^x = t root. Requires t > e.
inline double phi_asymptotic(double t) {
  if (!(t > std::exp(1.0))) throw DomainError("phi_asymptotic: requires t > e");
  return std::log(t) - std::log(std::log(t));
}

namespace detail {

// Solves x^k e^x = t for x >= 0 and k in {1, 2}. Both maps are strictly increasing on
// [0, inf), so the root is unique. Newton runs on the log form g(x) = x + k ln x - ln t,
// which never overflows, with a bracketing bisection fallback; the last steps polish in
// the original form so the stored residual meets the type invariant.
inline LambertSolution solve_power_exp(int k, double t) {
  if (std::isnan(t) || std::isinf(t)) throw NonFiniteError("lambert solve: t must be finite");
  if (t < 0.0) throw DomainError("lambert solve: t must be nonnegative");
  if (t == 0.0) return {0.0, t, 0.0, 0};

  const double log_t = std::log(t);
  int iterations = 0;

  // Bracket [lo, hi] for the log-form g, which is -inf at 0+ and increasing.
  double lo = std::numeric_limits<double>::min();
  double hi = std::max(2.0, log_t + 2.0);

  // Initial guess: phi-style for large t, linearized near zero otherwise.
  double x;
  if (t > std::exp(2.0)) {
    x = std::max(log_t - k * std::log(log_t), 0.5);
  } else if (k == 1) {
    x = t / (1.0 + t);
  } else {
    const double s = std::sqrt(t);
    x = s / (1.0 + s);
  }
  x = std::clamp(x, lo, hi);

  auto g = [&](double v) { return v + k * std::log(v) - log_t; };

  for (int i = 0; i < 120; ++i) {
    ++iterations;
    const double gv = g(x);
    if (gv > 0.0) hi = std::min(hi, x);
    else lo = std::max(lo, x);
    const double step = gv / (1.0 + k / x);
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }

  // Polish in the original form. x + k ln x = ln t <= ~709.78 holds at the root, so
  // exp(x + k ln x) stays representable.
  double residual = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double f = std::exp(x + k * std::log(x)) - t;
    residual = f;
    if (f == 0.0) break;
    const double fprime = (f + t) * (1.0 + k / x);
    const double step = f / fprime;
    if (!std::isfinite(step) || std::abs(step) <= 1e-17 * std::max(1.0, x)) break;
    x -= step;
    ++iterations;
  }
  residual = std::exp(x + k * std::log(x)) - t;
  return {x, t, residual, iterations};
}

}  // namespace detail

/// Unique nonnegative root of x e^x = t (the paper's Phi).
inline LambertSolution solve_xexp(double t) { return detail::solve_power_exp(1, t); }

/// Unique nonnegative root of x^2 e^x = t.
inline LambertSolution solve_x2exp(double t) { return detail::solve_power_exp(2, t); }

}  // namespace qproots
