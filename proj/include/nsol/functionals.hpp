// Variational structure on the mass sphere S_a = {|u|₂² = a²}:
//
//   𝒥(u) = ½|∇u|₂² + ¼D(u) - (1/p)|u|_p^p - (μ/q)|u|_q^q,
//
// its Nehari and Pohožaev identities for solutions of the stationary
// equation with multiplier λ, and the combined Nehari-Pohožaev functional
//
//   P(u) = |∇u|₂² + ¼D(u) - γ_p|u|_p^p - μγ_q|u|_q^q,
//
// which equals dψ_u/ds at s = 0 for the fiber map ψ_u(s) = 𝒥(s ⋆ u).
#pragma once

#include "nsol/operators.hpp"
#include "nsol/params.hpp"

namespace nsol {

struct EnergyBreakdown {
  double T = 0.0;     // |∇u|₂²
  double D = 0.0;     // ∫∫ |u(x)|²|u(y)|²/|x-y|
  double Pp = 0.0;    // |u|_p^p
  double Qq = 0.0;    // |u|_q^q
  double J = 0.0;     // T/2 + D/4 - Pp/p - μQq/q
  double mass2 = 0.0; // |u|₂²
};

// Evaluates all energy components. Throws NumericError on non-finite values.
EnergyBreakdown energy(const RadialField &u, const ProblemParams &prm);

// P(u) as above; vanishes on the Nehari-Pohožaev manifold.
double pohozaev(const RadialField &u, const ProblemParams &prm);
double pohozaev(const EnergyBreakdown &e, const ProblemParams &prm);

// Magnitude scale for P residuals: T + D/4 + γ_p Pp + |μ|γ_q Qq.
double pohozaev_scale(const EnergyBreakdown &e, const ProblemParams &prm);

// Nehari identity residual T + λ·mass² + D - Pp - μQq (zero at solutions).
double nehari_residual(const RadialField &u, double lambda,
                       const ProblemParams &prm);

// Pohožaev identity residual
// ½T + (3λ/2)mass² + (5/4)D - (3/p)Pp - (3μ/q)Qq (zero at solutions).
double pohozaev_identity_residual(const RadialField &u, double lambda,
                                  const ProblemParams &prm);

// Multiplier consistent with the Nehari identity:
// λ = (-T - D + Pp + μQq) / mass².
double extract_lambda(const RadialField &u, const ProblemParams &prm);
double extract_lambda(const EnergyBreakdown &e, const ProblemParams &prm);

} // namespace nsol
