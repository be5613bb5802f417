#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qproots/errors.hpp"
#include "qproots/symbols.hpp"

namespace qproots {

struct Rectangle {
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  Complex center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
  bool contains_strict(Complex z) const {
    return z.real() > x_min && z.real() < x_max && z.imag() > y_min && z.imag() < y_max;
  }
  Rectangle dilated(double factor) const {
    const Complex c = center();
    const double hw = 0.5 * width() * factor;
    const double hh = 0.5 * height() * factor;
    return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
  }
};

struct Circle {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

/// A closed contour for argument-principle counting, traversed counterclockwise.
struct Contour {
  std::variant<Rectangle, Circle> shape;
  int boundary_samples = 512;  // initial sampling; at least 64

  Contour(Rectangle r, int samples = 512) : shape(r), boundary_samples(samples) { validate(); }
  Contour(Circle c, int samples = 512) : shape(c), boundary_samples(samples) { validate(); }

 private:
  void validate() const {
    if (boundary_samples < 64) throw DomainError("Contour: boundary_samples must be >= 64");
    if (const auto* r = std::get_if<Rectangle>(&shape)) {
      if (!(r->width() > 0.0) || !(r->height() > 0.0)) throw DomainError("Contour: rectangle must have positive area");
    } else {
      if (!(std::get<Circle>(shape).radius > 0.0)) throw DomainError("Contour: circle must have positive radius");
    }
  }
};

enum class RootMethod {
  winding_subdivision,
  newton_refined,
  certified_rouche,
  closed_form,
};

inline constexpr std::string_view method_token(RootMethod m) {
  switch (m) {
    case RootMethod::winding_subdivision: return "winding_subdivision";
    case RootMethod::newton_refined: return "newton_refined";
    case RootMethod::certified_rouche: return "certified_rouche";
    case RootMethod::closed_form: return "closed_form";
  }
  return "unknown";
}

/// A located characteristic root.
struct Root {
  SymbolFamily family;
  int n = 1;
  std::optional<int> k;  // branch index, when the root is tied to one
  Complex lambda{0.0, 0.0};
  double residual = 0.0;  // |F(lambda)| / (|lambda|^2 + mu + 1)
  RootMethod method = RootMethod::newton_refined;
  bool certified = false;
  std::optional<double> rouche_margin;  // present iff certified
};

namespace detail {

// Counterclockwise boundary point at parameter u in [0, 1).
inline Complex boundary_point(const Rectangle& r, double u) {
  const double w = r.width(), h = r.height();
  const double per = 2.0 * (w + h);
  double s = u * per;
  if (s < w) return {r.x_min + s, r.y_min};
  s -= w;
  if (s < h) return {r.x_max, r.y_min + s};
  s -= h;
  if (s < w) return {r.x_max - s, r.y_max};
  s -= w;
  return {r.x_min, r.y_max - s};
}

inline Complex boundary_point(const Circle& c, double u) {
  const double phi = 2.0 * kPi * u;
  return c.center + c.radius * Complex(std::cos(phi), std::sin(phi));
}

struct BoundaryNode {
  double u;
  Complex f;
};

// Evaluates F on the contour and enforces the guard band |F| > 1e-8 * scale.
inline Complex boundary_eval(const SymbolFamily& family, const Mode& mode, Complex z) {
  const Complex f = evaluate(family, mode, z);
  if (!(std::abs(f) > 1e-8 * scale(mode, z))) {
    throw BoundaryTooCloseError("winding_number: a zero lies within the boundary guard band");
  }
  return f;
}

inline double phase_increment(Complex a, Complex b) {
  return std::remainder(std::arg(b) - std::arg(a), 2.0 * kPi);
}

}  // namespace detail

/// Number of zeros of F_n inside the contour, counted with multiplicity, by summing boundary
/// phase increments. Sampling is refined adaptively until every increment is below pi/2, which
/// makes the rounded turn count integer-exact.
inline int winding_number(const SymbolFamily& family, const Mode& mode, const Contour& contour) {
  auto point_at = [&](double u) {
    return std::visit([&](const auto& s) { return detail::boundary_point(s, u); }, contour.shape);
  };

  const int initial = std::max(64, contour.boundary_samples);
  std::vector<detail::BoundaryNode> nodes;
  nodes.reserve(static_cast<std::size_t>(initial) + 16);
  for (int i = 0; i < initial; ++i) {
    const double u = static_cast<double>(i) / initial;
    nodes.push_back({u, detail::boundary_eval(family, mode, point_at(u))});
  }

  constexpr std::size_t kNodeCap = std::size_t{1} << 21;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<detail::BoundaryNode> refined;
    refined.reserve(nodes.size() * 2);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const detail::BoundaryNode& a = nodes[i];
      const detail::BoundaryNode& b = nodes[(i + 1) % nodes.size()];
      refined.push_back(a);
      if (std::abs(detail::phase_increment(a.f, b.f)) >= 0.5 * kPi) {
        double du = b.u - a.u;
        if (i + 1 == nodes.size()) du += 1.0;
        if (du < 1e-13) {
          throw BoundaryTooCloseError("winding_number: unresolvable phase jump (zero on the contour)");
        }
        double um = a.u + 0.5 * du;
        if (um >= 1.0) um -= 1.0;
        refined.push_back({um, detail::boundary_eval(family, mode, point_at(um))});
        changed = true;
      }
    }
    nodes = std::move(refined);
    if (nodes.size() > kNodeCap) {
      throw BoundaryTooCloseError("winding_number: sampling cap exceeded; zero too close to the contour");
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    total += detail::phase_increment(nodes[i].f, nodes[(i + 1) % nodes.size()].f);
  }
  const double turns = total / (2.0 * kPi);
  const long count = std::lround(turns);
  if (std::abs(turns - static_cast<double>(count)) > 0.25) {
    throw BoundaryTooCloseError("winding_number: phase sum did not settle to an integer");
  }
  return static_cast<int>(count);
}

struct NewtonResult {
  Complex lambda{0.0, 0.0};
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

/// Damped Newton iteration on F_n. The step is halved whenever the residual fails to
/// decrease; at most 60 outer iterations.
inline NewtonResult newton_refine(const SymbolFamily& family, const Mode& mode, Complex start,
                                  double tol, int max_iter = 60) {
  auto residual_of = [&](Complex z) {
    try {
      return relative_residual(family, mode, z);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Complex z = start;
  double res = residual_of(z);
  int it = 0;
  for (; it < max_iter && res > tol; ++it) {
    Complex f, df;
    try {
      f = evaluate(family, mode, z);
      df = derivative(family, mode, z);
    } catch (const Error&) {
      break;
    }
    if (!(std::abs(df) > 0.0)) break;
    Complex step = f / df;
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving) {
      const Complex candidate = z - step;
      const double cand_res = residual_of(candidate);
      if (cand_res < res) {
        z = candidate;
        res = cand_res;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return {z, res, res <= tol, it};
}

namespace detail {

inline int winding_of_rect(const SymbolFamily& family, const Mode& mode, const Rectangle& r,
                           int samples) {
  return winding_number(family, mode, Contour(r, samples));
}

// Recursive quadrisection. Cells partition the parent exactly; when a subdivision line grazes
// a zero the split ratio is jittered instead of dilating children, so no root can be counted
// twice. Winding-1 cells are polished by Newton; the refined root must land strictly inside
// its cell, which pins the one-to-one cell/root correspondence.
inline void subdivide_collect(const SymbolFamily& family, const Mode& mode, const Rectangle& cell,
                              int winding, int depth, double tol, int samples,
                              std::vector<Root>& out) {
  if (winding == 0) return;
  constexpr int kMaxDepth = 40;

  if (winding == 1) {
    const NewtonResult nr = newton_refine(family, mode, cell.center(), tol);
    if (nr.converged && cell.contains_strict(nr.lambda)) {
      out.push_back(Root{family, mode.n, std::nullopt, nr.lambda, nr.residual,
                         RootMethod::newton_refined, false, std::nullopt});
      return;
    }
  }

  if (depth >= kMaxDepth) {
    // Suspected multiple root: report the cell centroid rather than dropping it.
    const Complex c = cell.center();
    double res;
    try {
      res = relative_residual(family, mode, c);
    } catch (const Error&) {
      res = std::numeric_limits<double>::infinity();
    }
    out.push_back(Root{family, mode.n, std::nullopt, c, res, RootMethod::winding_subdivision,
                       false, std::nullopt});
    return;
  }

  static constexpr double kSplitJitter[] = {0.0,    0.013,  -0.017, 0.029, -0.037,
                                            0.047,  -0.053, 0.061,  -0.067};
  for (double jitter : kSplitJitter) {
    const double xm = cell.x_min + (0.5 + jitter) * cell.width();
    const double ym = cell.y_min + (0.5 - jitter) * cell.height();
    const Rectangle quads[4] = {
        {cell.x_min, xm, cell.y_min, ym},
        {xm, cell.x_max, cell.y_min, ym},
        {cell.x_min, xm, ym, cell.y_max},
        {xm, cell.x_max, ym, cell.y_max},
    };
    int child_winding[4];
    int sum = 0;
    bool usable = true;
    try {
      for (int q = 0; q < 4; ++q) {
        child_winding[q] = winding_of_rect(family, mode, quads[q], samples);
        sum += child_winding[q];
      }
    } catch (const BoundaryTooCloseError&) {
      usable = false;
    }
    if (!usable || sum != winding) continue;
    for (int q = 0; q < 4; ++q) {
      subdivide_collect(family, mode, quads[q], child_winding[q], depth + 1, tol, samples, out);
    }
    return;
  }
  throw BoundaryTooCloseError("find_roots: could not split a cell without grazing a zero");
}

}  // namespace detail

/// All zeros of F_n inside the box, isolated by winding subdivision and Newton-refined to
/// residual <= tol. If the box boundary grazes a zero it is dilated by 1.01 about its center,
/// at most 8 times, before giving up. Output is sorted by (Re, Im); its length equals the
/// winding number of the (possibly dilated) box.
inline std::vector<Root> find_roots(const SymbolFamily& family, const Mode& mode,
                                    const Rectangle& box, double tol = 1e-12,
                                    int boundary_samples = 512) {
  Rectangle current = box;
  int winding = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      winding = detail::winding_of_rect(family, mode, current, boundary_samples);
      break;
    } catch (const BoundaryTooCloseError&) {
      if (attempt >= 8) throw;
      current = current.dilated(1.01);
    }
  }

  std::vector<Root> roots;
  detail::subdivide_collect(family, mode, current, winding, 0, tol, boundary_samples, roots);
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  return roots;
}

/// min over the circle |lambda - w| = |w|/2 of (|lambda - w| - |b ln lambda|), with the
/// principal branch arg lambda in (-pi, pi). A positive value certifies the Rouche
/// hypothesis at sample resolution.
inline double rouche_margin(int b, Complex w, int samples) {
  if (b < 1) throw DomainError("rouche_margin: b must be a positive integer");
  if (samples < 256) throw DomainError("rouche_margin: samples must be >= 256");
  const double r = std::abs(w);
  if (!(r > 0.0)) throw DomainError("rouche_margin: w must be nonzero");

  double margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    const double phi = 2.0 * kPi * j / samples;
    const Complex lambda = w + 0.5 * r * Complex(std::cos(phi), std::sin(phi));
    if (std::abs(lambda.imag()) <= 1e-12 && lambda.real() < 0.0) {
      throw BranchCutError("rouche_margin: sample on the negative real axis");
    }
    margin = std::min(margin, 0.5 * r - b * std::abs(std::log(lambda)));
  }
  return margin;
}

/// Certifies the Lemma-1 unstable root of equation lambda + b ln(lambda) = w with
/// w = 2 ln n + i pi. b = 1 maps to ParabolicDelay, b = 2 to HyperbolicDelay (theta = 2,
/// h = 1). On success the returned root is the unique zero of the ORIGINAL quasipolynomial
/// inside |lambda - w| < |w|/2, Newton-polished against that quasipolynomial.
inline Root certify_unstable(int b, const Mode& mode, int rouche_samples = 2048,
                             int boundary_samples = 512) {
  if (b != 1 && b != 2) throw DomainError("certify_unstable: b must be 1 or 2");
  const double nn = static_cast<double>(mode.n) * mode.n;
  if (std::abs(mode.mu - nn) > 1e-9 * nn) {
    throw DomainError("certify_unstable: requires theta = 2 (mu = n^2)");
  }

  const Complex w(2.0 * std::log(static_cast<double>(mode.n)), kPi);
  const double margin = rouche_margin(b, w, rouche_samples);
  if (!(margin > 0.0)) {
    throw MarginNonPositiveError(
        margin, "certify_unstable: Rouche margin " + std::to_string(margin) +
                    " is not positive (n too small for the Lemma's hypothesis)");
  }

  const SymbolFamily family(b == 1 ? Family::ParabolicDelay : Family::HyperbolicDelay, 1.0, 2.0);
  const Contour disk(Circle{w, 0.5 * std::abs(w)}, boundary_samples);
  const int count = winding_number(family, mode, disk);
  if (count != 1) {
    throw WindingMismatchError(count, "certify_unstable: certification disk holds " +
                                          std::to_string(count) + " zeros, expected 1");
  }

  // Newton on the log-form equation from the disk center; it is extremely well conditioned
  // there. The final polish and residual always use the original quasipolynomial, since the
  // log-form branch choice could otherwise admit spurious solutions.
  Complex z = w;
  for (int i = 0; i < 80; ++i) {
    const Complex g = z + static_cast<double>(b) * std::log(z) - w;
    const Complex step = g / (1.0 + static_cast<double>(b) / z);
    z -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  const NewtonResult nr = newton_refine(family, mode, z, 1e-12);
  if (!nr.converged || !(nr.residual <= 1e-9)) {
    throw Error("certify_unstable: refinement against the original symbol failed");
  }
  if (!(std::abs(nr.lambda - w) < 0.5 * std::abs(w))) {
    throw WindingMismatchError(count, "certify_unstable: refined root left the certification disk");
  }

  return Root{family, mode.n, std::nullopt, nr.lambda, nr.residual, RootMethod::certified_rouche,
              true, margin};
}

/// Max Re over the roots found in the box; empty box yields nullopt.
inline std::optional<double> spectral_abscissa_window(const SymbolFamily& family, const Mode& mode,
                                                      const Rectangle& box, double tol = 1e-12,
                                                      int boundary_samples = 512) {
  const std::vector<Root> roots = find_roots(family, mode, box, tol, boundary_samples);
  if (roots.empty()) return std::nullopt;
  double best = -std::numeric_limits<double>::infinity();
  for (const Root& r : roots) best = std::max(best, r.lambda.real());
  return best;
}

}  // namespace qproots
