#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "qproots/integrator.hpp"

using namespace qproots;
using Catch::Approx;

namespace {

Trajectory run(Family kind, int n, double t_end, double dt) {
  return simulate_mode(SymbolFamily(kind), Mode(n), HistorySpec{}, t_end, dt);
}

double value_at(const Trajectory& traj, double t) {
  const auto idx = static_cast<std::size_t>(std::llround(t / traj.dt));
  REQUIRE(idx < traj.values.size());
  REQUIRE(traj.times[idx] == Approx(t).margin(1e-9));
  return traj.values[idx];
}

}  // namespace

TEST_CASE("parabolic mode matches the exact piecewise-polynomial solution") {
  const oracles::ExactFirstOrderDelay exact_mu1(1.0, 30);
  const Trajectory traj = run(Family::ParabolicDelay, 1, 30.0, 0.01);
  // Exact values on the first intervals are simple rationals.
  CHECK(exact_mu1(2.5) == Approx(-19.0 / 48.0).epsilon(1e-15));
  for (double t : {1.0, 2.5, 5.0, 10.0, 20.0, 30.0}) {
    CHECK(value_at(traj, t) == Approx(exact_mu1(t)).margin(1e-8));
  }

  const oracles::ExactFirstOrderDelay exact_mu4(4.0, 10);
  const Trajectory grow = run(Family::ParabolicDelay, 2, 10.0, 0.01);
  CHECK(exact_mu4(10.0) == Approx(325.66850088183421517).epsilon(1e-12));
  CHECK(value_at(grow, 10.0) == Approx(exact_mu4(10.0)).epsilon(1e-8));
}

TEST_CASE("hyperbolic mode matches the exact piecewise-polynomial solution") {
  const oracles::ExactSecondOrderDelay exact(1.0, 30);
  const Trajectory traj = run(Family::HyperbolicDelay, 1, 30.0, 0.01);
  CHECK(exact(10.0) == Approx(-12.893921401526989312).epsilon(1e-12));
  for (double t : {1.0, 2.5, 5.0, 10.0, 20.0, 30.0}) {
    CHECK(value_at(traj, t) == Approx(exact(t)).margin(1e-7 * std::max(1.0, std::abs(exact(t)))));
  }
}

TEST_CASE("stable and perturbed modes match their exact first-interval solutions") {
  // On [0, 1] the delayed term is the constant history, so the equations integrate in
  // closed form: stable T(1) = 2 e^{-mu} - 1, perturbed T(1) = 2 cos(sqrt(mu)) - 1.
  for (int n : {1, 2, 3}) {
    const double mu = double(n) * n;
    const Trajectory stable = run(Family::StableParabolicDelay, n, 2.0, 1.0 / 100.0);
    CHECK(value_at(stable, 1.0) == Approx(2.0 * std::exp(-mu) - 1.0).margin(1e-10));
    const Trajectory perturbed = run(Family::PerturbedHyperbolic, n, 2.0, 1.0 / 100.0);
    CHECK(value_at(perturbed, 1.0) == Approx(2.0 * std::cos(std::sqrt(mu)) - 1.0).margin(1e-10));
  }
}

TEST_CASE("Maxwell-Cattaneo mode reproduces its closed-form solution") {
  // T'' + T' + mu T = 0 with T(0)=1, T'(0)=0:
  // T = e^{-t/2} (cos wt + sin(wt)/(2w)), w = sqrt(mu - 1/4).
  for (int n : {1, 2}) {
    const double mu = double(n) * n;
    const double w = std::sqrt(mu - 0.25);
    const Trajectory traj = run(Family::MaxwellCattaneo, n, 30.0, 0.01);
    for (double t : {1.0, 5.0, 10.0, 25.0}) {
      const double exact = std::exp(-t / 2.0) * (std::cos(w * t) + std::sin(w * t) / (2.0 * w));
      CHECK(value_at(traj, t) == Approx(exact).margin(1e-8));
    }
  }
}

TEST_CASE("parabolic n=1 decays while n=2 grows") {
  const Trajectory decay = run(Family::ParabolicDelay, 1, 30.0, 0.01);
  double early = 0.0, late = 0.0;
  for (std::size_t i = 0; i < decay.values.size(); ++i) {
    const double a = std::abs(decay.values[i]);
    if (decay.times[i] <= 10.0) early = std::max(early, a);
    if (decay.times[i] >= 20.0) late = std::max(late, a);
  }
  CHECK(late < 0.1 * early);

  const Trajectory growth = run(Family::ParabolicDelay, 2, 30.0, 0.01);
  const GrowthEstimate est = estimate_growth(growth, 1.0);
  CHECK(est.sigma_hat > 0.0);
  // Oscillation: the trajectory changes sign.
  int sign_changes = 0;
  for (std::size_t i = 1; i < growth.values.size(); ++i) {
    if ((growth.values[i] < 0) != (growth.values[i - 1] < 0)) ++sign_changes;
  }
  CHECK(sign_changes > 5);
}

TEST_CASE("grid preconditions are enforced") {
  const SymbolFamily family(Family::ParabolicDelay);
  const Mode mode(1);
  CHECK_THROWS_AS(simulate_mode(family, mode, HistorySpec{}, 10.0, 0.3), GridMismatchError);
  CHECK_THROWS_AS(simulate_mode(family, mode, HistorySpec{}, 10.0, 1.0 / 25.0), GridMismatchError);
  CHECK_THROWS_AS(simulate_mode(family, mode, HistorySpec{}, 10.0, -0.01), GridMismatchError);
  CHECK_THROWS_AS(simulate_mode(family, mode, HistorySpec{}, 300.0, 0.01), DomainError);

  HistorySpec bad;
  bad.value = HistoryFunction::constant(std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(simulate_mode(family, mode, bad, 10.0, 0.01), NonFiniteHistoryError);
}

TEST_CASE("estimate_growth recovers the rate of a synthetic signal") {
  Trajectory synthetic;
  synthetic.family = SymbolFamily(Family::ParabolicDelay);
  synthetic.n = 1;
  synthetic.h = 1.0;
  synthetic.dt = 0.01;
  for (int i = 0; i <= 3000; ++i) {
    const double t = i * 0.01;
    synthetic.times.push_back(t);
    synthetic.values.push_back(std::exp(0.3 * t) * std::cos(5.0 * t));
  }
  const GrowthEstimate est = estimate_growth(synthetic, 1.0);
  CHECK(est.sigma_hat == Approx(0.3).margin(0.01));
  CHECK(est.r_squared >= 0.99);
  CHECK(est.reliable);
  CHECK(est.peaks_used >= 10);
}

TEST_CASE("estimate_growth needs at least ten peaks") {
  Trajectory flat;
  flat.family = SymbolFamily(Family::ParabolicDelay);
  flat.dt = 0.01;
  for (int i = 0; i <= 1000; ++i) {
    flat.times.push_back(i * 0.01);
    flat.values.push_back(0.0);
  }
  CHECK_THROWS_AS(estimate_growth(flat, 1.0), TooFewPeaksError);
  CHECK_THROWS_AS(estimate_growth(flat, 0.0), DomainError);
  CHECK_THROWS_AS(estimate_growth(flat, 1.5), DomainError);
}

TEST_CASE("history scaling is exactly linear") {
  HistorySpec doubled;
  doubled.value = HistoryFunction::constant(2.0);
  const Trajectory base = run(Family::ParabolicDelay, 2, 20.0, 0.01);
  const Trajectory twice =
      simulate_mode(SymbolFamily(Family::ParabolicDelay), Mode(2), doubled, 20.0, 0.01);
  REQUIRE(base.values.size() == twice.values.size());
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    CHECK(std::abs(twice.values[i] - 2.0 * base.values[i]) <=
          1e-12 * std::max(1.0, std::abs(twice.values[i])));
  }
}

TEST_CASE("history variants evaluate as specified") {
  HistorySpec sin_history;
  sin_history.value = HistoryFunction::sinusoid(2.0, 3.0, 0.5);
  CHECK(sin_history.value(-0.25) == Approx(2.0 * std::sin(3.0 * -0.25 + 0.5)).epsilon(1e-15));
  HistorySpec poly_history;
  poly_history.value = HistoryFunction::polynomial({1.0, -2.0, 0.5});
  CHECK(poly_history.value(-1.0) == Approx(1.0 + 2.0 + 0.5).epsilon(1e-15));

  // A sinusoidal history still produces a finite, integrable trajectory.
  const Trajectory traj = simulate_mode(SymbolFamily(Family::ParabolicDelay), Mode(1),
                                        sin_history, 10.0, 0.01);
  CHECK(traj.values.size() == 1001);
  CHECK_FALSE(traj.blow_up_index.has_value());
}

TEST_CASE("undelayed second-order stepping reproduces cos(nt)") {
  // With the delayed term read at the current time the hyperbolic family reduces to
  // T'' = -n^2 T; over ten periods the integrator must track cos(nt) to 1e-6.
  const int n = 2;
  const double period = 2.0 * kPi / n;
  const double t_end = 10.0 * period;
  const Trajectory traj =
      detail::simulate_impl(SymbolFamily(Family::HyperbolicDelay), Mode(n), HistorySpec{}, t_end,
                            0.005, detail::DelayHandling::EvaluateAtCurrentTime);
  for (std::size_t i = 0; i < traj.values.size(); i += 100) {
    CHECK(traj.values[i] == Approx(std::cos(n * traj.times[i])).margin(1e-6));
  }
}

TEST_CASE("halving dt moves the fitted growth rate by less than one percent") {
  for (Family kind : {Family::ParabolicDelay, Family::HyperbolicDelay,
                      Family::PerturbedHyperbolic, Family::StableParabolicDelay,
                      Family::MaxwellCattaneo}) {
    for (int n = 1; n <= 3; ++n) {
      const Trajectory coarse = run(kind, n, 60.0, 1.0 / 100.0);
      const Trajectory fine = run(kind, n, 60.0, 1.0 / 200.0);
      const double sigma_coarse = estimate_growth(coarse, 1.0).sigma_hat;
      const double sigma_fine = estimate_growth(fine, 1.0).sigma_hat;
      CHECK(std::abs(sigma_coarse - sigma_fine) <
            0.01 * std::max(0.05, std::abs(sigma_coarse)));
    }
  }
}

TEST_CASE("cross_validate ties the growth rate to the spectral abscissa") {
  // Hyperbolic n=1: dominant root 0.3252 + 0.7853 i.
  const auto hyperbolic = cross_validate(SymbolFamily(Family::HyperbolicDelay), Mode(1),
                                         Rectangle{-3, 3, -5, 5});
  REQUIRE(hyperbolic.abscissa.has_value());
  CHECK(*hyperbolic.abscissa == Approx(0.325199296437733853).margin(1e-8));
  REQUIRE(hyperbolic.rel_error.has_value());
  CHECK(*hyperbolic.rel_error <= 0.05);

  // Stable family: decaying, negative fitted rate.
  const auto stable = cross_validate(SymbolFamily(Family::StableParabolicDelay), Mode(1),
                                     Rectangle{-3, 3, -5, 5});
  CHECK(stable.sigma_hat < 0.0);
  REQUIRE(stable.abscissa.has_value());
  CHECK(*stable.abscissa == Approx(-0.605020917292706611).margin(1e-8));

  // Maxwell-Cattaneo n=2: exact abscissa -1/2.
  const auto mc = cross_validate(SymbolFamily(Family::MaxwellCattaneo), Mode(2),
                                 Rectangle{-3, 3, -5, 5});
  REQUIRE(mc.abscissa.has_value());
  CHECK(*mc.abscissa == Approx(-0.5).margin(1e-10));
  CHECK(mc.sigma_hat == Approx(-0.5).margin(0.01));
  REQUIRE(mc.rel_error.has_value());
  CHECK(*mc.rel_error <= 0.05);
}

TEST_CASE("blow-up is flagged and recording stops") {
  // theta = 8 makes mu = 2^8 = 256; the parabolic mode then overflows well before t = 200.
  const SymbolFamily family(Family::ParabolicDelay, 1.0, 8.0);
  const Trajectory traj = simulate_mode(family, Mode(2, 8.0), HistorySpec{}, 200.0, 0.01);
  REQUIRE(traj.blow_up_index.has_value());
  CHECK(*traj.blow_up_index == traj.values.size());
  for (double v : traj.values) CHECK(std::isfinite(v));
}
