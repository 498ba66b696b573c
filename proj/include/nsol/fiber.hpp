// Fiber maps: for u ∈ S_a and the dilation (s ⋆ u)(x) = e^{3s/2}u(e^s x),
//
//   ψ_u(s) = 𝒥(s ⋆ u) = (e^{2s}/2)T + (e^s/4)D
//            - (e^{pγ_p s}/p)Pp - (μ e^{qγ_q s}/q)Qq,
//
// evaluated exactly from the four components of u, so dilation enters
// analytically rather than through resampling. ψ_u′(s) = P(s ⋆ u).
//
// Geometry of the critical points:
//   two-critical: a local minimum s_u and a global maximum t_u with zeros
//                 c_u < d_u interlaced as s_u < c_u < t_u < d_u,
//                 ψ(s_u) < 0 < ψ(t_u)  (focusing μ > 0, q below 8/3,
//                 p above 10/3, mass below the two-branch threshold);
//   one-critical: a unique critical point, a strict maximum at positive
//                 level (μ ≤ 0, or single-branch focusing regimes);
//   degenerate:   a root of ψ′ with vanishing ψ″, no critical point at all,
//                 or an ambiguous scan.
#pragma once

#include "nsol/functionals.hpp"

#include <limits>
#include <string>

namespace nsol {

struct FiberComponents {
  double T = 0.0, D = 0.0, Pp = 0.0, Qq = 0.0;
  double mass2 = 0.0;
};

enum class FiberRegime { two_critical, one_critical, degenerate };

std::string to_string(FiberRegime r);

struct FiberProfile {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  double s_u = nan; // local minimum position (two-critical only)
  double t_u = nan; // global maximum position
  double c_u = nan; // first zero of ψ (two-critical only)
  double d_u = nan; // last zero of ψ
  double psi_s = nan;  // ψ(s_u)
  double psi_t = nan;  // ψ(t_u)
  double dd_s = nan;   // ψ″(s_u)
  double dd_t = nan;   // ψ″(t_u)
  FiberRegime regime = FiberRegime::degenerate;
};

FiberComponents fiber_components(const RadialField &u,
                                 const ProblemParams &prm);

// ψ, ψ′, ψ″ from precomputed components.
double fiber_value(const FiberComponents &c, const ProblemParams &prm,
                   double s);
double fiber_derivative(const FiberComponents &c, const ProblemParams &prm,
                        double s);
double fiber_second_derivative(const FiberComponents &c,
                               const ProblemParams &prm, double s);
double fiber_second_derivative(const RadialField &u, const ProblemParams &prm,
                               double s);

// Scans ψ′ for sign changes on [s_min, s_max], polishes roots with
// safeguarded Newton, classifies the geometry. Requires mass2(u) = a²
// within 1e-8 relative (fibers live on S_a). Throws ParamError otherwise.
FiberProfile fiber_profile(const RadialField &u, const ProblemParams &prm,
                           double s_min = -20.0, double s_max = 20.0,
                           double lattice = 0.05);
FiberProfile fiber_profile(const FiberComponents &c, const ProblemParams &prm,
                           double s_min = -20.0, double s_max = 20.0,
                           double lattice = 0.05);

} // namespace nsol
