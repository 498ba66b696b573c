// Explicit mass thresholds controlling the constrained geometry, all derived
// from the Gagliardo-Nirenberg bound applied to 𝒥:
//
//   𝒥(u) ≥ |∇u|₂² f(a, |∇u|₂),
//   f(a,t) = ½ - μ(C_q^q/q) a^{(1-γ_q)q} t^{γ_q q-2}
//              - (C_p^p/p) a^{(1-γ_p)p} t^{pγ_p-2},
//
// valid in the focusing two-branch regime μ > 0, q ∈ (2, 8/3),
// p ∈ (10/3, 6). f(a,·) has the unique maximizer
//
//   ρ_a = [ μ p (2-qγ_q) C_q^q / (q (pγ_p-2) C_p^p) ·
//           a^{q(1-γ_q)-p(1-γ_p)} ]^{1/(pγ_p-qγ_q)},
//
// and max f_a = ½ - K a^{𝓑/(pγ_p-qγ_q)} with 𝓑 and K explicit, which
// vanishes exactly at the threshold mass a₀ = (1/(2K))^{(pγ_p-qγ_q)/𝓑}.
// Below ā₀ = min{a₀, ...} the barrier h(t) = t² f_a(t) is positive exactly
// on (R₀, R₁) and the reference radius ρ₀ := ρ_{a₀} lies inside.
//
// The report also carries the L²-critical mass a* = (p̄/(2C_p̄^p̄))^{3/4}
// (p̄ = 10/3), and the two multiplier-positivity mass conditions used by the
// mountain-pass solvers (cond_k3 for the subcritical-q branch, cond_k201 for
// the critical-q branch).
#pragma once

#include "nsol/params.hpp"

#include <limits>

namespace nsol {

struct ThresholdReport {
  double C_p_pow = 0.0; // C_p^p
  double C_q_pow = 0.0; // C_q^q
  double C_12_5_pow = 0.0; // C_{12/5}^{12/5}

  double K = std::numeric_limits<double>::quiet_NaN();
  double exponent_B = std::numeric_limits<double>::quiet_NaN(); // 𝓑
  double a0 = std::numeric_limits<double>::quiet_NaN();
  double abar0 = std::numeric_limits<double>::quiet_NaN();
  double rho_a = std::numeric_limits<double>::quiet_NaN(); // maximizer at mass a
  double rho0 = std::numeric_limits<double>::quiet_NaN();  // ρ_{a₀}
  double R0 = std::numeric_limits<double>::quiet_NaN();
  double R1 = std::numeric_limits<double>::quiet_NaN();
  double a_star = std::numeric_limits<double>::quiet_NaN(); // p = 10/3 only

  bool two_branch_regime = false; // μ>0, q∈(2,8/3), p∈(10/3,6)
  bool cond_k3 = false;   // multiplier-sign mass bound, subcritical q branch
  bool cond_k201 = false; // multiplier-sign mass bound, critical q branch
  double k3_bound = std::numeric_limits<double>::quiet_NaN(); // rhs of cond_k3
};

// f(a, t) for gradient value t > 0.
double f_of(double a, double t, const ProblemParams &prm, double C_p_pow,
            double C_q_pow);

// Barrier h(t) = t² f(a, t).
double barrier_h(double a, double t, const ProblemParams &prm, double C_p_pow,
                 double C_q_pow);

// Computes every threshold defined for the given parameters; quantities whose
// defining regime does not hold are left NaN. Throws ParamError only for
// invalid base parameters. gn_tol is forwarded to the constant cache.
ThresholdReport thresholds(const ProblemParams &prm, double gn_tol = 1e-10);

} // namespace nsol
