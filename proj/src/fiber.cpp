#include "nsol/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nsol/functionals.hpp"
#include "nsol/operators.hpp"

namespace nsol {

std::string to_string(FiberRegime r) {
  switch (r) {
  case FiberRegime::two_critical: return "two-critical";
  case FiberRegime::one_critical: return "one-critical";
  default: return "degenerate";
  }
}

FiberComponents fiber_components(const RadialField &u,
                                 const ProblemParams &prm) {
  const EnergyBreakdown e = energy(u, prm);
  return FiberComponents{e.T, e.D, e.Pp, e.Qq, e.mass2};
}

// psi(s) = e^{2s} T/2 + e^{s} D/4 - e^{p gp s} Pp/p - mu e^{q gq s} Qq/q
double fiber_value(const FiberComponents &c, const ProblemParams &prm,
                   double s) {
  const double gp = prm.gamma_p(), gq = prm.gamma_q();
  return 0.5 * std::exp(2.0 * s) * c.T + 0.25 * std::exp(s) * c.D -
         std::exp(prm.p * gp * s) * c.Pp / prm.p -
         prm.mu * std::exp(prm.q * gq * s) * c.Qq / prm.q;
}

double fiber_derivative(const FiberComponents &c, const ProblemParams &prm,
                        double s) {
  const double gp = prm.gamma_p(), gq = prm.gamma_q();
  return std::exp(2.0 * s) * c.T + 0.25 * std::exp(s) * c.D -
         gp * std::exp(prm.p * gp * s) * c.Pp -
         prm.mu * gq * std::exp(prm.q * gq * s) * c.Qq;
}

double fiber_second_derivative(const FiberComponents &c,
                               const ProblemParams &prm, double s) {
  const double gp = prm.gamma_p(), gq = prm.gamma_q();
  return 2.0 * std::exp(2.0 * s) * c.T + 0.25 * std::exp(s) * c.D -
         prm.p * gp * gp * std::exp(prm.p * gp * s) * c.Pp -
         prm.mu * prm.q * gq * gq * std::exp(prm.q * gq * s) * c.Qq;
}

double fiber_second_derivative(const RadialField &u, const ProblemParams &prm,
                               double s) {
  return fiber_second_derivative(fiber_components(u, prm), prm, s);
}

namespace {

// Scale against which derivative magnitudes are judged negligible.
double fiber_scale(const FiberComponents &c, const ProblemParams &prm) {
  return c.T + 0.25 * c.D + c.Pp + std::abs(prm.mu) * c.Qq;
}

// Polishes a sign-change bracket [lo, hi] of psi' with Newton steps
// safeguarded by bisection.
double polish_root(const FiberComponents &c, const ProblemParams &prm,
                   double lo, double hi) {
  double flo = fiber_derivative(c, prm, lo);
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = fiber_derivative(c, prm, s);
    const double df = fiber_second_derivative(c, prm, s);
    if ((f < 0.0) == (flo < 0.0)) lo = s; else hi = s;
    double ns = s - f / df;
    if (!(ns > lo && ns < hi)) ns = 0.5 * (lo + hi);
    if (std::abs(ns - s) < 1e-14 * std::max(1.0, std::abs(s))) return ns;
    s = ns;
  }
  return s;
}

// Finds all roots of psi' on [s_min, s_max] at the given lattice pitch.
std::vector<double> scan_roots(const FiberComponents &c,
                               const ProblemParams &prm, double s_min,
                               double s_max, double pitch) {
  std::vector<double> roots;
  double prev_s = s_min;
  double prev_f = fiber_derivative(c, prm, prev_s);
  const std::size_t steps =
      static_cast<std::size_t>(std::ceil((s_max - s_min) / pitch));
  for (std::size_t k = 1; k <= steps; ++k) {
    const double s = std::min(s_min + static_cast<double>(k) * pitch, s_max);
    const double f = fiber_derivative(c, prm, s);
    if ((prev_f < 0.0) != (f < 0.0))
      roots.push_back(polish_root(c, prm, prev_s, s));
    else if (f == 0.0)
      roots.push_back(s);
    prev_s = s;
    prev_f = f;
  }
  return roots;
}

// Bisects psi itself for a zero inside a bracket with opposite signs.
double bisect_value(const FiberComponents &c, const ProblemParams &prm,
                    double lo, double hi) {
  double flo = fiber_value(c, prm, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = fiber_value(c, prm, mid);
    if ((f < 0.0) == (flo < 0.0)) { lo = mid; flo = f; } else { hi = mid; }
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

} // namespace

FiberProfile fiber_profile(const FiberComponents &c, const ProblemParams &prm,
                           double s_min, double s_max, double lattice) {
  prm.validate();
  if (!(c.T > 0.0) || !(c.mass2 > 0.0))
    throw ParamError("fiber profile requires a nonzero field");
  if (std::abs(c.mass2 - prm.a * prm.a) > 1e-6 * prm.a * prm.a)
    throw ParamError("fiber profile requires a field on the mass sphere");

  FiberProfile fp;
  std::vector<double> roots = scan_roots(c, prm, s_min, s_max, lattice);
  if (roots.size() > 2) {
    roots = scan_roots(c, prm, s_min, s_max, lattice / 10.0);
    if (roots.size() > 2) {
      fp.regime = FiberRegime::degenerate;
      return fp;
    }
  }
  if (roots.empty()) {
    fp.regime = FiberRegime::degenerate;
    return fp;
  }

  const double scale = fiber_scale(c, prm);
  const double dd_tol = 1e-10 * scale;

  if (roots.size() == 2) {
    const double s0 = roots[0], s1 = roots[1];
    const double dd0 = fiber_second_derivative(c, prm, s0);
    const double dd1 = fiber_second_derivative(c, prm, s1);
    if (!(dd0 > dd_tol) || !(dd1 < -dd_tol)) {
      fp.regime = FiberRegime::degenerate;
      return fp;
    }
    fp.regime = FiberRegime::two_critical;
    fp.s_u = s0;
    fp.t_u = s1;
    fp.dd_s = dd0;
    fp.dd_t = dd1;
    fp.psi_s = fiber_value(c, prm, s0);
    fp.psi_t = fiber_value(c, prm, s1);
    // First zero between the local minimum (negative level) and the maximum
    // (positive level), second zero beyond the maximum.
    if (fp.psi_s < 0.0 && fp.psi_t > 0.0)
      fp.c_u = bisect_value(c, prm, s0, s1);
    double hi = s1 + 1.0;
    double span = 1.0;
    while (fiber_value(c, prm, hi) > 0.0 && hi < s_max + 60.0) {
      span *= 2.0;
      hi += span;
    }
    if (fiber_value(c, prm, hi) <= 0.0)
      fp.d_u = bisect_value(c, prm, s1, hi);
    return fp;
  }

  // Single critical point.
  const double s0 = roots[0];
  const double dd0 = fiber_second_derivative(c, prm, s0);
  if (dd0 < -dd_tol) {
    fp.regime = FiberRegime::one_critical;
    fp.t_u = s0;
    fp.dd_t = dd0;
    fp.psi_t = fiber_value(c, prm, s0);
    double hi = s0 + 1.0;
    double span = 1.0;
    while (fiber_value(c, prm, hi) > 0.0 && hi < s_max + 60.0) {
      span *= 2.0;
      hi += span;
    }
    if (fiber_value(c, prm, hi) <= 0.0)
      fp.d_u = bisect_value(c, prm, s0, hi);
  } else if (dd0 > dd_tol) {
    fp.regime = FiberRegime::one_critical;
    fp.s_u = s0;
    fp.dd_s = dd0;
    fp.psi_s = fiber_value(c, prm, s0);
  } else {
    fp.regime = FiberRegime::degenerate;
  }
  return fp;
}

FiberProfile fiber_profile(const RadialField &u, const ProblemParams &prm,
                           double s_min, double s_max, double lattice) {
  return fiber_profile(fiber_components(u, prm), prm, s_min, s_max, lattice);
}

} // namespace nsol
