#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qproots/symbols.hpp"

using namespace qproots;
using Catch::Approx;

namespace {
const SymbolFamily kAll[] = {
    SymbolFamily(Family::ParabolicDelay),      SymbolFamily(Family::HyperbolicDelay),
    SymbolFamily(Family::PerturbedHyperbolic), SymbolFamily(Family::StableParabolicDelay),
    SymbolFamily(Family::MaxwellCattaneo),
};
}

TEST_CASE("evaluate matches the closed forms at spot points") {
  CHECK(evaluate(SymbolFamily(Family::ParabolicDelay), Mode(3), {0.0, 0.0}) == Complex(9.0, 0.0));

  // Maxwell-Cattaneo root at n = 1: lambda = (-1 + i sqrt(3)) / 2.
  const Complex mc_root(-0.5, std::sqrt(3.0) / 2.0);
  CHECK(std::abs(evaluate(SymbolFamily(Family::MaxwellCattaneo), Mode(1), mc_root)) < 1e-15);

  // e^{-i pi} = -1 cancels the delay pair of the perturbed family.
  const Complex at_ipi = evaluate(SymbolFamily(Family::PerturbedHyperbolic), Mode(1), {0.0, kPi});
  CHECK(at_ipi.real() == Approx(-kPi * kPi).epsilon(1e-14));
  CHECK(std::abs(at_ipi.imag()) < 1e-12);
}

TEST_CASE("derivative matches the closed forms at spot points") {
  CHECK(derivative(SymbolFamily(Family::ParabolicDelay), Mode(1), {0.0, 0.0}) == Complex(0.0, 0.0));
  CHECK(derivative(SymbolFamily(Family::MaxwellCattaneo), Mode(5), {0.0, 0.0}) == Complex(1.0, 0.0));
  CHECK(derivative(SymbolFamily(Family::HyperbolicDelay), Mode(2), {0.0, 0.0}) == Complex(-4.0, 0.0));
}

TEST_CASE("evaluate at lambda = 0 reduces to the family's constant term") {
  for (int n : {1, 2, 7}) {
    const Mode mode(n);
    const double mu = mode.mu;
    CHECK(evaluate(SymbolFamily(Family::ParabolicDelay), mode, {0, 0}).real() == Approx(mu));
    CHECK(evaluate(SymbolFamily(Family::HyperbolicDelay), mode, {0, 0}).real() == Approx(mu));
    CHECK(evaluate(SymbolFamily(Family::PerturbedHyperbolic), mode, {0, 0}).real() == Approx(2 * mu));
    CHECK(evaluate(SymbolFamily(Family::StableParabolicDelay), mode, {0, 0}).real() == Approx(2 * mu));
    CHECK(evaluate(SymbolFamily(Family::MaxwellCattaneo), mode, {0, 0}).real() == Approx(mu));
  }
}

TEST_CASE("conjugation symmetry: F(conj lambda) = conj F(lambda)") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex lambda(coord(rng), coord(rng));
    const Mode mode(1 + trial % 5);
    for (const SymbolFamily& family : kAll) {
      const Complex direct = evaluate(family, mode, std::conj(lambda));
      const Complex mirrored = std::conj(evaluate(family, mode, lambda));
      CHECK(std::abs(direct - mirrored) <= 1e-12 * (1.0 + std::abs(mirrored)));
    }
  }
}

TEST_CASE("derivative agrees with a central finite difference") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  int checked = 0;
  while (checked < 100) {
    const Complex lambda(coord(rng), coord(rng));
    if (std::abs(lambda) > 50.0) continue;
    ++checked;
    const Mode mode(1 + checked % 4);
    const double step = 1e-5 * (1.0 + std::abs(lambda));
    for (const SymbolFamily& family : kAll) {
      const Complex fd = (evaluate(family, mode, lambda + step) -
                          evaluate(family, mode, lambda - step)) /
                         (2.0 * step);
      const Complex exact = derivative(family, mode, lambda);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("overflow guard rejects |Re lambda * h| > 700 for delay families") {
  CHECK_THROWS_AS(evaluate(SymbolFamily(Family::ParabolicDelay), Mode(1), {701.0, 0.0}),
                  OverflowGuardError);
  CHECK_THROWS_AS(evaluate(SymbolFamily(Family::HyperbolicDelay), Mode(1), {-701.0, 0.0}),
                  OverflowGuardError);
  CHECK_THROWS_AS(derivative(SymbolFamily(Family::StableParabolicDelay), Mode(2), {800.0, 1.0}),
                  OverflowGuardError);
  // h scales the guard: |Re lambda| = 400 with h = 2 is already out of range.
  CHECK_THROWS_AS(evaluate(SymbolFamily(Family::ParabolicDelay, 2.0), Mode(1), {400.0, 0.0}),
                  OverflowGuardError);
  // Maxwell-Cattaneo has no exponential term and stays evaluable.
  CHECK(std::isfinite(evaluate(SymbolFamily(Family::MaxwellCattaneo), Mode(1), {1e3, 0.0}).real()));
}

TEST_CASE("family tokens round-trip") {
  for (const SymbolFamily& family : kAll) {
    const auto parsed = parse_family(family_token(family.kind));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == family.kind);
  }
  CHECK_FALSE(parse_family("no-such-family").has_value());
}

TEST_CASE("mode and family validation") {
  CHECK_THROWS_AS(Mode(0), DomainError);
  CHECK_THROWS_AS(Mode(-3), DomainError);
  CHECK_THROWS_AS(SymbolFamily(Family::ParabolicDelay, 0.0), DomainError);
  CHECK_THROWS_AS(SymbolFamily(Family::ParabolicDelay, 1.0, -1.0), DomainError);

  const Mode cubic(4, 3.0);
  CHECK(cubic.mu == Approx(64.0));
  const Mode fractional(9, 0.5);
  CHECK(fractional.mu == Approx(3.0));
}
