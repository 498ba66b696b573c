// Problem parameters for the stationary equation
//
//   -Δu + λu + (|x|⁻¹ ∗ |u|²) u = |u|^{p-2}u + μ|u|^{q-2}u   in ℝ³,
//   ∫ |u|² dx = a²,
//
// and for the associated time-dependent flow. The scaling exponents
// γ_t = 3(t-2)/(2t) control how each term responds to the mass-preserving
// dilation (s ⋆ u)(x) = e^{3s/2} u(e^s x).
#pragma once

#include "nsol/errors.hpp"

#include <cmath>
#include <sstream>

namespace nsol {

// L²-critical exponent in three dimensions: t·γ_t = 2 exactly at t = 10/3.
inline constexpr double kCriticalExponent = 10.0 / 3.0;

inline double gamma_of(double t) { return 3.0 * (t - 2.0) / (2.0 * t); }

struct ProblemParams {
  double a = 1.0;  // prescribed mass: |u|₂ = a
  double mu = 1.0; // coupling of the q-power term
  double p = 4.0;  // leading power, in (2, 6]
  double q = 2.2;  // secondary power, in (2, 6], q != p

  double gamma_p() const { return gamma_of(p); }
  double gamma_q() const { return gamma_of(q); }

  // Throws ParamError unless the exponents and mass are admissible.
  void validate() const {
    std::ostringstream oss;
    if (!(a > 0.0) || !std::isfinite(a)) {
      oss << "mass parameter a must be positive and finite, got " << a;
      throw ParamError(oss.str());
    }
    if (!std::isfinite(mu)) throw ParamError("coupling mu must be finite");
    if (!(p > 2.0 && p <= 6.0)) {
      oss << "exponent p must lie in (2, 6], got " << p;
      throw ParamError(oss.str());
    }
    if (!(q > 2.0 && q <= 6.0)) {
      oss << "exponent q must lie in (2, 6], got " << q;
      throw ParamError(oss.str());
    }
    if (p == q) throw ParamError("exponents p and q must differ");
  }
};

} // namespace nsol
