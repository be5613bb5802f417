#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include "qproots/errors.hpp"

namespace qproots {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// The five characteristic quasipolynomial families.
///
/// With mu = n^theta and delay h:
///   ParabolicDelay        F(lambda) = lambda   + mu e^{-lambda h}
///   HyperbolicDelay       F(lambda) = lambda^2 + mu e^{-lambda h}
///   PerturbedHyperbolic   F(lambda) = lambda^2 + mu (1 + e^{-lambda h})
///   StableParabolicDelay  F(lambda) = lambda   + mu (1 + e^{-lambda h})
///   MaxwellCattaneo       F(lambda) = lambda^2 + lambda + mu        (no delay term)
enum class Family {
  ParabolicDelay,
  HyperbolicDelay,
  PerturbedHyperbolic,
  StableParabolicDelay,
  MaxwellCattaneo,
};

inline constexpr std::string_view family_token(Family kind) {
  switch (kind) {
    case Family::ParabolicDelay: return "parabolic-delay";
    case Family::HyperbolicDelay: return "hyperbolic-delay";
    case Family::PerturbedHyperbolic: return "perturbed-hyperbolic";
    case Family::StableParabolicDelay: return "stable-parabolic-delay";
    case Family::MaxwellCattaneo: return "maxwell-cattaneo";
  }
  return "unknown";
}

inline std::optional<Family> parse_family(std::string_view token) {
  for (Family f : {Family::ParabolicDelay, Family::HyperbolicDelay, Family::PerturbedHyperbolic,
                   Family::StableParabolicDelay, Family::MaxwellCattaneo}) {
    if (token == family_token(f)) return f;
  }
  return std::nullopt;
}

/// A symbol family instance. MaxwellCattaneo carries h for type uniformity but never uses it.
struct SymbolFamily {
  Family kind = Family::ParabolicDelay;
  double h = 1.0;      // delay
  double theta = 2.0;  // coefficient exponent: mu = n^theta

  SymbolFamily() = default;
  SymbolFamily(Family kind_, double h_ = 1.0, double theta_ = 2.0)
      : kind(kind_), h(h_), theta(theta_) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("SymbolFamily: h must be positive and finite");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("SymbolFamily: theta must be positive and finite");
  }

  bool has_delay_term() const { return kind != Family::MaxwellCattaneo; }
  bool second_order() const {
    return kind == Family::HyperbolicDelay || kind == Family::PerturbedHyperbolic ||
           kind == Family::MaxwellCattaneo;
  }
};

/// A Fourier mode: index n >= 1 and the cached coefficient mu = n^theta.
/// mu is computed once, by this one power routine, so repeated evaluation is deterministic.
struct Mode {
  int n = 1;
  double mu = 1.0;

  explicit Mode(int n_, double theta = 2.0) : n(n_) {
    if (n_ < 1) throw DomainError("Mode: n must be >= 1");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("Mode: theta must be positive");
    mu = std::pow(static_cast<double>(n_), theta);
  }
};

/// Residual normalization: scale = |lambda|^2 + mu + 1.
inline double scale(const Mode& mode, Complex lambda) {
  return std::norm(lambda) + mode.mu + 1.0;
}

namespace detail {

// Overflow guard for the e^{-lambda h} factor. MaxwellCattaneo has no delay term and is exempt.
inline void check_exp_guard(const SymbolFamily& family, Complex lambda) {
  if (!family.has_delay_term()) return;
  if (std::abs(lambda.real() * family.h) > 700.0) {
    throw OverflowGuardError("evaluate: |Re(lambda) * h| exceeds 700; rescale or reject the contour");
  }
}

inline Complex require_finite(Complex value, const char* what) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw NonFiniteError(std::string(what) + ": non-finite result");
  }
  return value;
}

}  // namespace detail

/// Evaluate the characteristic quasipolynomial F_n(lambda).
inline Complex evaluate(const SymbolFamily& family, const Mode& mode, Complex lambda) {
  detail::check_exp_guard(family, lambda);
  const double mu = mode.mu;
  Complex result;
  switch (family.kind) {
    case Family::ParabolicDelay:
      result = lambda + mu * std::exp(-lambda * family.h);
      break;
    case Family::HyperbolicDelay:
      result = lambda * lambda + mu * std::exp(-lambda * family.h);
      break;
    case Family::PerturbedHyperbolic:
      result = lambda * lambda + mu * (1.0 + std::exp(-lambda * family.h));
      break;
    case Family::StableParabolicDelay:
      result = lambda + mu * (1.0 + std::exp(-lambda * family.h));
      break;
    case Family::MaxwellCattaneo:
      result = lambda * lambda + lambda + mu;
      break;
  }
  return detail::require_finite(result, "evaluate");
}

/// dF_n/dlambda for the same family.
inline Complex derivative(const SymbolFamily& family, const Mode& mode, Complex lambda) {
  detail::check_exp_guard(family, lambda);
  const double mu = mode.mu;
  const double h = family.h;
  Complex result;
  switch (family.kind) {
    case Family::ParabolicDelay:
      result = 1.0 - mu * h * std::exp(-lambda * h);
      break;
    case Family::HyperbolicDelay:
    case Family::PerturbedHyperbolic:
      result = 2.0 * lambda - mu * h * std::exp(-lambda * h);
      break;
    case Family::StableParabolicDelay:
      result = 1.0 - mu * h * std::exp(-lambda * h);
      break;
    case Family::MaxwellCattaneo:
      result = 2.0 * lambda + 1.0;
      break;
  }
  return detail::require_finite(result, "derivative");
}

/// |F_n(lambda)| / (|lambda|^2 + mu + 1), the residual measure used everywhere.
inline double relative_residual(const SymbolFamily& family, const Mode& mode, Complex lambda) {
  return std::abs(evaluate(family, mode, lambda)) / scale(mode, lambda);
}

}  // namespace qproots
