#include "nsol/functionals.hpp"

#include <cmath>

#include "nsol/operators.hpp"

namespace nsol {

EnergyBreakdown energy(const RadialField &u, const ProblemParams &prm) {
  prm.validate();
  EnergyBreakdown e;
  e.T = kinetic_energy(u);
  e.D = double_energy(u);
  e.Pp = lp_norm_pow(u, prm.p);
  e.Qq = lp_norm_pow(u, prm.q);
  e.mass2 = mass2(u);
  e.J = 0.5 * e.T + 0.25 * e.D - e.Pp / prm.p - prm.mu * e.Qq / prm.q;
  if (!std::isfinite(e.J))
    throw NumericError("energy evaluated to a non-finite value");
  return e;
}

double pohozaev(const EnergyBreakdown &e, const ProblemParams &prm) {
  return e.T + 0.25 * e.D - prm.gamma_p() * e.Pp -
         prm.mu * prm.gamma_q() * e.Qq;
}

double pohozaev(const RadialField &u, const ProblemParams &prm) {
  return pohozaev(energy(u, prm), prm);
}

double pohozaev_scale(const EnergyBreakdown &e, const ProblemParams &prm) {
  return e.T + 0.25 * e.D + prm.gamma_p() * e.Pp +
         std::abs(prm.mu) * prm.gamma_q() * e.Qq;
}

double extract_lambda(const EnergyBreakdown &e, const ProblemParams &prm) {
  return (-e.T - e.D + e.Pp + prm.mu * e.Qq) / e.mass2;
}

double extract_lambda(const RadialField &u, const ProblemParams &prm) {
  return extract_lambda(energy(u, prm), prm);
}

double nehari_residual(const RadialField &u, double lambda,
                       const ProblemParams &prm) {
  const EnergyBreakdown e = energy(u, prm);
  const double lhs = e.T + lambda * e.mass2 + e.D;
  const double rhs = e.Pp + prm.mu * e.Qq;
  const double scale = e.T + std::abs(lambda) * e.mass2 + e.D + e.Pp +
                       std::abs(prm.mu) * e.Qq;
  return std::abs(lhs - rhs) / scale;
}

double pohozaev_identity_residual(const RadialField &u, double lambda,
                                  const ProblemParams &prm) {
  const EnergyBreakdown e = energy(u, prm);
  const double lhs = 0.5 * e.T + 1.5 * lambda * e.mass2 + 1.25 * e.D;
  const double rhs = 3.0 * e.Pp / prm.p + 3.0 * prm.mu * e.Qq / prm.q;
  const double scale = 0.5 * e.T + 1.5 * std::abs(lambda) * e.mass2 +
                       1.25 * e.D + 3.0 * e.Pp / prm.p +
                       3.0 * std::abs(prm.mu) * e.Qq / prm.q;
  return std::abs(lhs - rhs) / scale;
}

} // namespace nsol
