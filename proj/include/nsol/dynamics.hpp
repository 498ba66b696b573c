// Time evolution for the radial flow
//
//   iφ_t + Δφ - (|x|⁻¹ ∗ |φ|²)φ + |φ|^{p-2}φ + μ|φ|^{q-2}φ = 0,
//
// whose standing waves are φ(t) = e^{iλt}u(x). The default integrator is
// Strang splitting: the linear half-steps use Crank-Nicolson on the
// tridiagonal system for v = rφ, which conserves the discrete mass to
// round-off, and the nonlinear step is an exact pointwise phase rotation by
// V = Φ_φ - |φ|^{p-2} - μ|φ|^{q-2}, which preserves |φ| (V depends on the
// modulus only). The alternative "cn" scheme is Crank-Nicolson on the full
// right-hand side with fixed-point iteration on the midpoint potential.
//
// Virial quantities along the flow: H(t) = ∫|x|²|φ|², H′ = 4 Im ∫ φ̄ r ∂_r φ,
// H″ = 8 P(φ). Blow-up certification follows the concavity argument: for
// mountain-pass data compressed to t_u < 0 with 𝒥(u₀) < c_a, P(φ(t)) stays
// ≤ -η := 𝒥(u₀) - c_a, so H is trapped under the parabola
// H(0) + H′(0)t - 4ηt², which forces finite-time collapse.
#pragma once

#include "nsol/solvers.hpp"

namespace nsol {

struct InvariantSample {
  double t = 0.0;
  double mass2 = 0.0;
  double J = 0.0;
  double H = 0.0;
  double Hp = 0.0; // H′
  double P = 0.0;  // so H″ = 8P
  double grad_norm = 0.0; // |∇φ|₂
};

struct EvolutionState {
  double t = 0.0;
  RadialField phi;
  std::vector<InvariantSample> log;
  bool truncated_by_blowup_guard = false;
};

enum class TimeScheme { strang, cn };

std::string to_string(TimeScheme s);
TimeScheme scheme_from_string(const std::string &s);

struct EvolveOptions {
  double dt = 1e-3;
  TimeScheme scheme = TimeScheme::strang;
  std::int64_t sample_every = 10;
  double blowup_guard = 20.0; // stop when |∇φ|₂ exceeds this multiple of initial
  bool free_flow = false;     // drop all nonlinear couplings (dispersion tests)
  std::uint64_t seed = 0;     // perturbation draws in stability experiments
};

// Evolves phi0 for time T. Throws NumericError if the state degenerates.
EvolutionState evolve(const RadialField &phi0, const ProblemParams &prm,
                      double T, const EvolveOptions &opts = {});

// Virial data of a single field.
InvariantSample virial_diagnostics(const RadialField &phi,
                                   const ProblemParams &prm, double t = 0.0);

enum class VerdictKind { orbit_stable, blow_up, inconclusive };

std::string to_string(VerdictKind k);

struct StabilityVerdict {
  VerdictKind kind = VerdictKind::inconclusive;
  std::string evidence;
  double epsilon = 0.0; // orbit-distance bound tested against
  double delta = 0.0;   // initial perturbation size (relative, H¹)
  double sup_distance = 0.0;       // sup_t d(t)/‖û‖ over all runs
  double eta = 0.0;                // instability gap c_a - 𝒥(u₀)
  double envelope_root = 0.0;      // positive root of H(0)+H′(0)t-4ηt²
  double grad_growth_time = -1.0;  // first time |∇φ| reached 10× initial
  bool left_constraint_ball = false;
  std::vector<EvolutionState> runs;
};

// Orbital stability experiment around a local-minimum report: evolves
// n_perturbations randomly perturbed data (relative H¹ size delta,
// renormalized to mass a) and tracks the phase-minimized H¹ orbit distance
// d(t) = min_θ ‖φ(t) - e^{iθ}|û|‖.
StabilityVerdict stability_experiment(const SolveReport &report,
                                      const ProblemParams &prm,
                                      int n_perturbations, double delta,
                                      double T, const EvolveOptions &opts = {});

// Instability experiment around a mountain-pass report: evolves the
// compressed datum u_ϱ = ϱ ⋆ û (ϱ > 0, so t_{u_ϱ} = -ϱ < 0) and certifies
// blow-up when the gradient grows 10× before the virial envelope's root with
// H concave and H″ ≤ -8η along the way. Returns blow-up or inconclusive,
// never stability.
StabilityVerdict instability_experiment(const SolveReport &report,
                                        const ProblemParams &prm, double rho,
                                        double T,
                                        const EvolveOptions &opts = {});

// Writes the invariant log as CSV (t, mass2, J, H, Hp, P, grad_norm).
void write_trajectory_csv(const std::string &path,
                          const std::vector<InvariantSample> &log);

} // namespace nsol
