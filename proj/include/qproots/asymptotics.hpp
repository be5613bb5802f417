#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qproots/errors.hpp"
#include "qproots/lambert.hpp"
#include "qproots/rootfinder.hpp"
#include "qproots/symbols.hpp"

// Closed-form and semi-closed-form root predictions. All asymptotics here assume h = 1,
// the case the derivations fix; the symbols accept general h but these formulas do not.

namespace qproots {

/// Leading-order (x, y) prediction for a root family at mode n (branch k when applicable).
struct AsymptoticPrediction {
  Family family = Family::ParabolicDelay;
  int n = 1;
  std::optional<int> k;
  double x_pred = 0.0;
  double y_pred = 0.0;
  std::string order_note;
};

/// x ~ ln n^2 - ln ln n^2 and y ~ pi (1 - 1/x) for the parabolic delay family. Requires n >= 2.
inline AsymptoticPrediction predict_parabolic(int n) {
  if (n < 2) throw DomainError("predict_parabolic: requires n >= 2 so that ln ln n^2 > 0");
  const double ln_n2 = std::log(static_cast<double>(n) * n);
  const double x = ln_n2 - std::log(ln_n2);
  const double y = kPi * (1.0 - 1.0 / x);
  return {Family::ParabolicDelay, n, std::nullopt, x, y,
          "leading order; drops O(ln ln n^2 / ln n^2)"};
}

/// x ~ 2 (ln(n/2) - ln ln(n/2)) for the hyperbolic delay family, via eta = 2pi/delta - 2 and
/// y = pi - delta. Requires n >= 6.
inline AsymptoticPrediction predict_hyperbolic(int n) {
  if (n < 6) throw DomainError("predict_hyperbolic: requires n >= 6 so that ln ln(n/2) > 0");
  const double half = 0.5 * n;
  const double eta = 2.0 * (std::log(half) - std::log(std::log(half)));
  const double delta = 2.0 * kPi / (eta + 2.0);
  const double x = 2.0 * kPi / delta - 2.0;  // equals eta by construction
  const double y = kPi - delta;
  return {Family::HyperbolicDelay, n, std::nullopt, x, y,
          "leading order; + branch of t = (1 - cos y)/sin y; drops O(ln ln(n/2) / ln(n/2))"};
}

/// An integer n with cos n > alpha and cos(n+1) < -1/4, used to bracket the perturbed-wave roots.
struct AdmissibleIndex {
  int n = 0;
  double cos_n = 0.0;
  double cos_n1 = 0.0;
};

/// All admissible n <= N in ascending order, with alpha fixed at 1/4.
inline std::vector<AdmissibleIndex> admissible_indices(int N, double alpha = 0.25) {
  if (N < 1) throw DomainError("admissible_indices: N must be >= 1");
  std::vector<AdmissibleIndex> out;
  for (int n = 1; n <= N; ++n) {
    const double cn = std::cos(static_cast<double>(n));
    const double cn1 = std::cos(static_cast<double>(n) + 1.0);
    if (cn > alpha && cn1 < -0.25) out.push_back({n, cn, cn1});
  }
  return out;
}

/// U_n(y) = Phi(n^2 sin y / 2y) + (y cos y - sqrt(y^2 - n^2 sin^2 y)) / sin y.
/// Its zero in (n, n+1) locates the imaginary part of a perturbed-wave root.
inline double u_function(int n, double y) {
  if (n < 1) throw DomainError("u_function: n must be >= 1");
  if (!std::isfinite(y) || !(y > 0.0)) throw DomainError("u_function: y must be positive");
  const double s = std::sin(y);
  if (!(s > 0.0)) throw DomainError("u_function: sin y must be positive");
  const double nn = static_cast<double>(n) * n;
  const double radicand = y * y - nn * s * s;
  if (radicand < 0.0) throw DomainError("u_function: negative radicand");
  const double phi = solve_xexp(nn * s / (2.0 * y)).x;
  return phi + (y * std::cos(y) - std::sqrt(radicand)) / s;
}

/// Locates the perturbed-wave root with Im in (n, n+1): bisection on U_n to 1e-10, then
/// x = Phi(n^2 sin y / 2y), then a Newton polish against the perturbed-hyperbolic symbol.
inline Root find_perturbed_root(const AdmissibleIndex& index) {
  const int n = index.n;
  double lo = static_cast<double>(n);
  double hi = static_cast<double>(n) + 1.0;
  const double u_lo = u_function(n, lo);
  const double u_hi = u_function(n, hi);
  if (!(u_lo > 0.0 && u_hi < 0.0)) {
    throw NoBracketError("find_perturbed_root: U_n does not change sign on (n, n+1); n too small");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
    const double mid = 0.5 * (lo + hi);
    (u_function(n, mid) > 0.0 ? lo : hi) = mid;
  }
  const double y = 0.5 * (lo + hi);
  const double x = solve_xexp(static_cast<double>(n) * n * std::sin(y) / (2.0 * y)).x;

  const SymbolFamily family(Family::PerturbedHyperbolic, 1.0, 2.0);
  const Mode mode(n, 2.0);
  const NewtonResult nr = newton_refine(family, mode, Complex(x, y), 1e-12);
  if (!nr.converged || !(nr.residual <= 1e-9)) {
    throw Error("find_perturbed_root: Newton polish failed");
  }
  if (!(nr.lambda.imag() > n && nr.lambda.imag() < n + 1)) {
    throw Error("find_perturbed_root: refined root left the (n, n+1) strip");
  }
  return Root{family, n, std::nullopt, nr.lambda, nr.residual, RootMethod::newton_refined, false,
              std::nullopt};
}

/// The Maxwell-Cattaneo pair lambda_n^{+-} = -1/2 +- i sqrt(4n^2 - 1)/2, exact closed form.
/// Both real parts are the literal -1/2 for every n >= 1.
inline std::pair<Complex, Complex> mc_roots(int n) {
  if (n < 1) throw DomainError("mc_roots: n must be >= 1");
  const double beta = std::sqrt(4.0 * static_cast<double>(n) * n - 1.0) / 2.0;
  return {Complex(-0.5, beta), Complex(-0.5, -beta)};
}

/// Branch asymptotics of the parabolic-delay roots at fixed n:
/// x ~ ln n^2 - ln|pi/2 + 2 pi k| + pi/(2 pi k), y ~ +-(pi/2 + 2 pi k).
inline AsymptoticPrediction predict_branch(int n, int k, int sign) {
  if (n < 1) throw DomainError("predict_branch: n must be >= 1");
  if (k < 1) throw DomainError("predict_branch: k must be >= 1");
  if (sign != 1 && sign != -1) throw DomainError("predict_branch: sign must be +1 or -1");
  const double y_mag = 0.5 * kPi + 2.0 * kPi * k;
  const double x = std::log(static_cast<double>(n) * n) - std::log(y_mag) + kPi / (2.0 * kPi * k);
  return {Family::ParabolicDelay, n, k, x, sign * y_mag,
          "drops o(1/k) real and O(ln k / k) imaginary corrections; sign applies to the "
          "imaginary part only"};
}

}  // namespace qproots
