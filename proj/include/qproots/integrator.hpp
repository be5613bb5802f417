#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qproots/errors.hpp"
#include "qproots/rootfinder.hpp"
#include "qproots/symbols.hpp"

// Method-of-steps time integration of the modal delay ODEs:
//   ParabolicDelay        T' (t) = -mu T(t - h)
//   HyperbolicDelay       T''(t) = -mu T(t - h)
//   PerturbedHyperbolic   T''(t) = -mu (T(t) + T(t - h))
//   StableParabolicDelay  T' (t) = -mu (T(t) + T(t - h))
//   MaxwellCattaneo       T''(t) = -T'(t) - mu T(t)      (plain second-order ODE)
// Classical RK4 inside each step; the delayed term is read from a cubic piecewise
// interpolation of the stored solution, matching the one-step method's local order.

namespace qproots {

struct HistoryFunction {
  enum class Kind { Constant, Sinusoid, Polynomial };

  Kind kind = Kind::Constant;
  double c = 0.0;                                        // Constant
  double amplitude = 0.0, frequency = 0.0, phase = 0.0;  // amplitude * sin(frequency t + phase)
  std::vector<double> coefficients;                      // sum_i coefficients[i] t^i

  static HistoryFunction constant(double value) {
    HistoryFunction f;
    f.kind = Kind::Constant;
    f.c = value;
    return f;
  }
  static HistoryFunction sinusoid(double amplitude, double frequency, double phase) {
    HistoryFunction f;
    f.kind = Kind::Sinusoid;
    f.amplitude = amplitude;
    f.frequency = frequency;
    f.phase = phase;
    return f;
  }
  static HistoryFunction polynomial(std::vector<double> coeffs) {
    HistoryFunction f;
    f.kind = Kind::Polynomial;
    f.coefficients = std::move(coeffs);
    return f;
  }

  double operator()(double t) const {
    switch (kind) {
      case Kind::Constant: return c;
      case Kind::Sinusoid: return amplitude * std::sin(frequency * t + phase);
      case Kind::Polynomial: {
        double acc = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
        return acc;
      }
    }
    return 0.0;
  }
};

/// Initial data on [-h, 0]: the value history, plus a derivative history for the
/// second-order families.
struct HistorySpec {
  HistoryFunction value = HistoryFunction::constant(1.0);
  HistoryFunction derivative = HistoryFunction::constant(0.0);
};

struct Trajectory {
  SymbolFamily family;
  int n = 1;
  double h = 1.0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> derivative_values;  // empty for first-order families
  std::optional<std::size_t> blow_up_index;

  bool second_order() const { return !derivative_values.empty(); }
};

/// Fitted exponential growth rate of a trajectory's peak envelope.
struct GrowthEstimate {
  double sigma_hat = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  int peaks_used = 0;
  bool reliable = false;  // r_squared >= 0.9
};

namespace detail {

inline constexpr double kBlowUpThreshold = 1e300;

// Cubic 4-point Lagrange interpolation of the stored grid at query time t <= frontier * dt.
// The stencil is clamped to the available range, so queries near t = 0 use a one-sided cubic.
inline double interp_cubic(const std::vector<double>& values, double dt, double t,
                           std::size_t frontier) {
  const double pos = t / dt;
  const double rounded = std::round(pos);
  if (std::abs(pos - rounded) < 1e-9 && rounded >= 0.0 &&
      static_cast<std::size_t>(rounded) <= frontier) {
    return values[static_cast<std::size_t>(rounded)];
  }
  if (frontier < 3) {  // cannot happen with h/dt >= 50, kept as a safety net
    const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(pos), frontier);
    return values[j];
  }
  long base = static_cast<long>(std::floor(pos)) - 1;
  base = std::clamp(base, 0L, static_cast<long>(frontier) - 3);
  const double s = pos - static_cast<double>(base);
  const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  const std::size_t b = static_cast<std::size_t>(base);
  return w0 * values[b] + w1 * values[b + 1] + w2 * values[b + 2] + w3 * values[b + 3];
}

// When true, the delayed term is read at the current time instead of t - h. This reduces
// the hyperbolic family to T'' = -mu T and exists to validate the stepping core against
// the exact oscillator.
enum class DelayHandling { Delayed, EvaluateAtCurrentTime };

inline Trajectory simulate_impl(const SymbolFamily& family, const Mode& mode,
                                const HistorySpec& history, double t_end, double dt,
                                DelayHandling delay_handling) {
  const double h = family.h;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw GridMismatchError("simulate_mode: dt must be positive");
  const double ratio = h / dt;
  const long m = std::lround(ratio);
  if (m < 50 || std::abs(ratio - static_cast<double>(m)) > 1e-9 * static_cast<double>(m)) {
    throw GridMismatchError("simulate_mode: dt must equal h/m for an integer m >= 50");
  }
  if (!(t_end > 0.0) || t_end > 200.0 * h * (1.0 + 1e-12)) {
    throw DomainError("simulate_mode: t_end must lie in (0, 200 h]");
  }
  for (int i = 0; i <= 64; ++i) {
    const double t = -h + h * i / 64.0;
    if (!std::isfinite(history.value(t)) || !std::isfinite(history.derivative(t))) {
      throw NonFiniteHistoryError("simulate_mode: history not finite on [-h, 0]");
    }
  }

  const bool second = family.second_order();
  const double mu = mode.mu;
  const std::size_t steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));

  Trajectory traj;
  traj.family = family;
  traj.n = mode.n;
  traj.h = h;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.values.reserve(steps + 1);
  if (second) traj.derivative_values.reserve(steps + 1);

  double y = history.value(0.0);
  double v = second ? history.derivative(0.0) : 0.0;
  traj.times.push_back(0.0);
  traj.values.push_back(y);
  if (second) traj.derivative_values.push_back(v);

  // Delayed value lookup; stage times never exceed the stored frontier because dt <= h/50.
  auto delayed = [&](double tq) {
    if (tq <= 0.0) return history.value(tq);
    return interp_cubic(traj.values, dt, tq, traj.values.size() - 1);
  };

  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;

    if (second) {
      auto accel = [&](double ts, double ys, double vs) {
        switch (family.kind) {
          case Family::HyperbolicDelay:
            return -mu * (delay_handling == DelayHandling::Delayed ? delayed(ts - h) : ys);
          case Family::PerturbedHyperbolic:
            return -mu * (ys + (delay_handling == DelayHandling::Delayed ? delayed(ts - h) : ys));
          case Family::MaxwellCattaneo:
            return -vs - mu * ys;
          default:
            return 0.0;
        }
      };
      const double k1y = v, k1v = accel(t, y, v);
      const double k2y = v + 0.5 * dt * k1v, k2v = accel(t + 0.5 * dt, y + 0.5 * dt * k1y, v + 0.5 * dt * k1v);
      const double k3y = v + 0.5 * dt * k2v, k3v = accel(t + 0.5 * dt, y + 0.5 * dt * k2y, v + 0.5 * dt * k2v);
      const double k4y = v + dt * k3v, k4v = accel(t + dt, y + dt * k3y, v + dt * k3v);
      y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    } else {
      auto slope = [&](double ts, double ys) {
        const double lag = delay_handling == DelayHandling::Delayed ? delayed(ts - h) : ys;
        switch (family.kind) {
          case Family::ParabolicDelay: return -mu * lag;
          case Family::StableParabolicDelay: return -mu * (ys + lag);
          default: return 0.0;
        }
      };
      const double k1 = slope(t, y);
      const double k2 = slope(t + 0.5 * dt, y + 0.5 * dt * k1);
      const double k3 = slope(t + 0.5 * dt, y + 0.5 * dt * k2);
      const double k4 = slope(t + dt, y + dt * k3);
      y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    const bool blown = !std::isfinite(y) || std::abs(y) > kBlowUpThreshold ||
                       (second && (!std::isfinite(v) || std::abs(v) > kBlowUpThreshold));
    if (blown) {
      traj.blow_up_index = traj.times.size();
      break;
    }
    traj.times.push_back(static_cast<double>(i + 1) * dt);
    traj.values.push_back(y);
    if (second) traj.derivative_values.push_back(v);
  }
  return traj;
}

}  // namespace detail

/// Integrates the modal equation on [0, t_end] with the given history. Requires dt = h/m for
/// integer m >= 50 and t_end <= 200 h. Recording stops at the first sample exceeding 1e300.
inline Trajectory simulate_mode(const SymbolFamily& family, const Mode& mode,
                                const HistorySpec& history, double t_end, double dt) {
  return detail::simulate_impl(family, mode, history, t_end, dt,
                               detail::DelayHandling::Delayed);
}

/// Least-squares slope of ln|peak| against peak time over the trailing window_fraction of the
/// recorded span. Peaks are the local maxima of |value| (the left endpoint counts when it
/// dominates its neighbor, e.g. a zero-slope start). Requires at least 10 peaks.
inline GrowthEstimate estimate_growth(const Trajectory& traj, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw DomainError("estimate_growth: window_fraction must lie in (0, 1]");
  }
  const std::size_t count = traj.values.size();
  if (count < 3) throw TooFewPeaksError("estimate_growth: trajectory too short");

  const double t_first = traj.times.front();
  const double t_last = traj.times.back();
  const double window_start = t_last - window_fraction * (t_last - t_first);

  std::vector<std::pair<double, double>> peaks;  // (t, ln|peak|)
  for (std::size_t i = 0; i < count; ++i) {
    const double a = std::abs(traj.values[i]);
    bool is_peak;
    if (i == 0) {
      is_peak = a > std::abs(traj.values[1]);
    } else if (i + 1 == count) {
      is_peak = false;
    } else {
      is_peak = a > std::abs(traj.values[i - 1]) && a >= std::abs(traj.values[i + 1]);
    }
    if (is_peak && a > 0.0 && traj.times[i] >= window_start - 1e-12) {
      peaks.emplace_back(traj.times[i], std::log(a));
    }
  }
  if (peaks.size() < 10) {
    throw TooFewPeaksError("estimate_growth: fewer than 10 envelope peaks in the fit window");
  }

  double st = 0.0, sy = 0.0;
  for (const auto& [t, ln_a] : peaks) {
    st += t;
    sy += ln_a;
  }
  const double nP = static_cast<double>(peaks.size());
  const double mt = st / nP, my = sy / nP;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (const auto& [t, ln_a] : peaks) {
    stt += (t - mt) * (t - mt);
    sty += (t - mt) * (ln_a - my);
    syy += (ln_a - my) * (ln_a - my);
  }
  const double slope = sty / stt;
  double r2 = 1.0;
  if (syy > 1e-30) {
    double ss_res = 0.0;
    for (const auto& [t, ln_a] : peaks) {
      const double e = ln_a - (my + slope * (t - mt));
      ss_res += e * e;
    }
    r2 = std::max(0.0, 1.0 - ss_res / syy);
  }

  GrowthEstimate est;
  est.sigma_hat = slope;
  est.r_squared = r2;
  est.fit_window = {window_start, t_last};
  est.peaks_used = static_cast<int>(peaks.size());
  est.reliable = r2 >= 0.9;
  return est;
}

struct CrossValidation {
  double sigma_hat = 0.0;
  std::optional<double> abscissa;
  std::optional<double> rel_error;  // |sigma_hat - abscissa| / max(1, |abscissa|)
  GrowthEstimate fit;
};

/// Simulates with the default Constant(1) history (derivative history 0) over t_end = 60 h at
/// dt = h/100, then compares the fitted growth rate against the spectral abscissa of the box.
inline CrossValidation cross_validate(const SymbolFamily& family, const Mode& mode,
                                      const Rectangle& box) {
  const HistorySpec history;
  const Trajectory traj = simulate_mode(family, mode, history, 60.0 * family.h, family.h / 100.0);
  const GrowthEstimate fit = estimate_growth(traj, 1.0);

  CrossValidation cv;
  cv.sigma_hat = fit.sigma_hat;
  cv.fit = fit;
  cv.abscissa = spectral_abscissa_window(family, mode, box);
  if (cv.abscissa) {
    cv.rel_error = std::abs(fit.sigma_hat - *cv.abscissa) / std::max(1.0, std::abs(*cv.abscissa));
  }
  return cv;
}

}  // namespace qproots
