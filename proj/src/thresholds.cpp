#include "nsol/thresholds.hpp"

#include <cmath>

#include "nsol/gn.hpp"

namespace nsol {

double f_of(double a, double t, const ProblemParams &prm, double C_p_pow,
            double C_q_pow) {
  const double gp = prm.gamma_p(), gq = prm.gamma_q();
  return 0.5 -
         prm.mu * (C_q_pow / prm.q) * std::pow(a, (1.0 - gq) * prm.q) *
             std::pow(t, prm.q * gq - 2.0) -
         (C_p_pow / prm.p) * std::pow(a, (1.0 - gp) * prm.p) *
             std::pow(t, prm.p * gp - 2.0);
}

double barrier_h(double a, double t, const ProblemParams &prm, double C_p_pow,
                 double C_q_pow) {
  return t * t * f_of(a, t, prm, C_p_pow, C_q_pow);
}

namespace {

constexpr double kExponentTol = 1e-12;

// Bisects h(a, .) to a sign change inside the bracket [lo, hi], where the
// signs at the ends differ. Returns the root to relative 1e-12.
double bisect_barrier(double a, double lo, double hi, const ProblemParams &prm,
                      double Cp, double Cq) {
  double flo = barrier_h(a, lo, prm, Cp, Cq);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = barrier_h(a, mid, prm, Cp, Cq);
    if ((f < 0.0) == (flo < 0.0)) { lo = mid; flo = f; } else { hi = mid; }
    if (hi - lo < 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

} // namespace

ThresholdReport thresholds(const ProblemParams &prm, double gn_tol) {
  prm.validate();
  ThresholdReport rep;

  const double gp = prm.gamma_p(), gq = prm.gamma_q();
  const double pgp = prm.p * gp, qgq = prm.q * gq;

  rep.C_p_pow = gn_constant_pow(prm.p, gn_tol);
  rep.C_q_pow = gn_constant_pow(prm.q, gn_tol);
  rep.C_12_5_pow = gn_constant_pow(12.0 / 5.0, gn_tol);

  // Mass threshold at the critical power: a* = (p/(2 C_p^p))^{3/4} with
  // p = 10/3, where the kinetic and focusing terms scale together.
  if (std::abs(prm.p - kCriticalExponent) < kExponentTol)
    rep.a_star = std::pow(prm.p / (2.0 * rep.C_p_pow), 0.75);

  rep.two_branch_regime = prm.mu > 0.0 && prm.q > 2.0 &&
                          prm.q < 8.0 / 3.0 &&
                          prm.p > kCriticalExponent + kExponentTol &&
                          prm.p < 6.0;

  if (rep.two_branch_regime) {
    const double A = pgp - 2.0;   // > 0
    const double Bq = 2.0 - qgq;  // > 0
    const double S = pgp - qgq;   // > 0
    const double ln_mu = std::log(prm.mu);
    const double ln_Cp = std::log(rep.C_p_pow);
    const double ln_Cq = std::log(rep.C_q_pow);
    const double ln_a = std::log(prm.a);

    // Maximizer of f(a, .): ρ_a = [μ p (2-qγq) C_q^q a^{q(1-γq)-p(1-γp)}
    //                              / (q (pγp-2) C_p^p)]^{1/(pγp-qγq)}
    rep.rho_a = std::exp(
        (ln_mu + std::log(prm.p) + std::log(Bq) + ln_Cq - std::log(prm.q) -
         std::log(A) - ln_Cp +
         (prm.q * (1.0 - gq) - prm.p * (1.0 - gp)) * ln_a) /
        S);

    // Coefficient K in max_t f(a, t) = 1/2 - K a^{B/(pγp-qγq)}:
    //   K = (μ C_q^q/q)^{(pγp-2)/(pγp-qγq)}
    //         [p(2-qγq)/((pγp-2) C_p^p)]^{(qγq-2)/(pγp-qγq)}
    //     + (p/C_p^p)^{(qγq-2)/(pγp-qγq)}
    //         [μ(2-qγq) C_q^q/(q(pγp-2))]^{(pγp-2)/(pγp-qγq)}
    const double term1 =
        std::exp((A / S) * (ln_mu + ln_Cq - std::log(prm.q)) +
                 (-Bq / S) * (std::log(prm.p) + std::log(Bq) - std::log(A) -
                              ln_Cp));
    const double term2 =
        std::exp((-Bq / S) * (std::log(prm.p) - ln_Cp) +
                 (A / S) * (ln_mu + std::log(Bq) + ln_Cq - std::log(prm.q) -
                            std::log(A)));
    rep.K = term1 + term2;

    // Exponent B = (q-qγq)(pγp-2) + (p-pγp)(2-qγq), positive here.
    rep.exponent_B = (prm.q - qgq) * A + (prm.p - pgp) * Bq;

    // Largest mass with max_t f(a, t) > 0: a0 = (1/(2K))^{(pγp-qγq)/B}.
    rep.a0 = std::exp((S / rep.exponent_B) * -std::log(2.0 * rep.K));

    // Two-branch mass bound:
    //   ā0 = min{a0, [p(2-qγq)/(2C_p^p(pγp-qγq))]^{(2-qγq)/B}
    //                [q(pγp-2)/(2μC_q^q(pγp-qγq))]^{(pγp-2)/B}}
    const double second = std::exp(
        (Bq / rep.exponent_B) *
            (std::log(prm.p) + std::log(Bq) - std::log(2.0) - ln_Cp -
             std::log(S)) +
        (A / rep.exponent_B) * (std::log(prm.q) + std::log(A) -
                                std::log(2.0) - ln_mu - ln_Cq - std::log(S)));
    rep.abar0 = std::min(rep.a0, second);

    // Gradient-ball radius ρ0 = ρ_{a0}, the maximizer at the zero-crossing
    // mass, and the positivity window (R0, R1) of h(a, .) at the given mass.
    rep.rho0 = std::exp(
        (ln_mu + std::log(prm.p) + std::log(Bq) + ln_Cq - std::log(prm.q) -
         std::log(A) - ln_Cp +
         (prm.q * (1.0 - gq) - prm.p * (1.0 - gp)) * std::log(rep.a0)) /
        S);

    if (f_of(prm.a, rep.rho_a, prm, rep.C_p_pow, rep.C_q_pow) > 0.0) {
      // h < 0 near 0 and near infinity; find the enclosing sign changes.
      double lo = rep.rho_a;
      while (barrier_h(prm.a, lo, prm, rep.C_p_pow, rep.C_q_pow) > 0.0 &&
             lo > 1e-280)
        lo *= 0.5;
      double hi = rep.rho_a;
      while (barrier_h(prm.a, hi, prm, rep.C_p_pow, rep.C_q_pow) > 0.0 &&
             hi < 1e280)
        hi *= 2.0;
      rep.R0 = bisect_barrier(prm.a, lo, rep.rho_a, prm, rep.C_p_pow,
                              rep.C_q_pow);
      rep.R1 = bisect_barrier(prm.a, rep.rho_a, hi, prm, rep.C_p_pow,
                              rep.C_q_pow);
    }
  }

  // Mountain-pass admissibility bound depending only on (a, p):
  //   a < (3/(4C_p^p))^{1/(2pγp+p-6)} (4/(4γp-1))^{(pγp-1)/(2pγp+p-6)}
  //       ((1-γp)/C_{12/5}^{12/5})^{(pγp-2)/(2pγp+p-6)}
  if (prm.p > kCriticalExponent + kExponentTol && prm.p < 6.0) {
    const double E = 2.0 * pgp + prm.p - 6.0;
    rep.k3_bound = std::exp(
        (1.0 / E) * std::log(3.0 / (4.0 * rep.C_p_pow)) +
        ((pgp - 1.0) / E) * std::log(4.0 / (4.0 * gp - 1.0)) +
        ((pgp - 2.0) / E) * std::log((1.0 - gp) / rep.C_12_5_pow));
    rep.cond_k3 = prm.a < rep.k3_bound;
  }

  // Critical-q admissibility: with q̄ = 10/3,
  //   (1/(C_p^p γp a^{p(1-γp)}))^{1/(pγp-2)}
  //   (1 - (3/5) C_q̄^q̄ μ a^{4/3})^{1/(pγp-2)} / a^3
  //     >= ((4γp-1)/(4(1-γp))) C_{12/5}^{12/5}
  if (prm.mu > 0.0 && prm.p > kCriticalExponent + kExponentTol &&
      prm.p < 6.0) {
    const double C_qbar_pow = gn_constant_pow(kCriticalExponent, gn_tol);
    const double bracket =
        1.0 - 0.6 * C_qbar_pow * prm.mu * std::pow(prm.a, 4.0 / 3.0);
    if (bracket > 0.0) {
      const double A = pgp - 2.0;
      const double lhs =
          std::exp((1.0 / A) * (-std::log(rep.C_p_pow) - std::log(gp) -
                                prm.p * (1.0 - gp) * std::log(prm.a)) +
                   (1.0 / A) * std::log(bracket) - 3.0 * std::log(prm.a));
      const double rhs =
          (4.0 * gp - 1.0) / (4.0 * (1.0 - gp)) * rep.C_12_5_pow;
      rep.cond_k201 = lhs >= rhs;
    } else {
      rep.cond_k201 = false;
    }
  }

  return rep;
}

} // namespace nsol
