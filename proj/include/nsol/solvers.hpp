// Constrained solvers on the mass sphere S_a.
//
// ground_state_local_min: minimizes 𝒥 over D_ρ₀ = {|∇u|₂ ≤ ρ₀} ∩ S_a in the
// two-branch regime (μ > 0, q ∈ (2, 8/3), p ∈ (10/3, 6), a < ā₀) by projected
// gradient descent with mass renormalization and Armijo backtracking. The
// descent direction is Sobolev-preconditioned (one tridiagonal solve); the
// stopping test uses the plain L² projected-gradient norm and |P(u)|.
//
// mountain_pass: minimizes u ↦ max_s 𝒥(s ⋆ u) by alternating the exact fiber
// rescale u ← t_u ⋆ u with projected-gradient steps, in the regimes where the
// mountain-pass solution is certified: focusing subcritical q with the
// multiplier mass bound, defocusing μ ≤ 0, critical q = 10/3 under its mass
// bound, and the single-branch family 10/3 < q < p.
//
// critical_global_min: global minimization of 𝒥 on S_a at the L²-critical
// p = 10/3 below the critical mass a*.
//
// Continuations warm-start along μ ↓ 0 and q ↓ 10/3 and report the solution
// sequence together with successive H¹ differences.
#pragma once

#include "nsol/fiber.hpp"
#include "nsol/thresholds.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nsol {

struct SolveResiduals {
  double euler_lagrange_L2 = 0.0; // ‖𝒥′(u) + λu‖₂ / ‖u‖₂
  double pohozaev_P = 0.0;        // |P(u)| / scale
  double nehari = 0.0;            // Nehari identity residual / scale
  double pohozaev_identity = 0.0; // Pohožaev identity residual / scale
};

enum class SolveKind { local_min, mountain_pass, global_min };

std::string to_string(SolveKind k);

struct SolveReport {
  RadialField profile;
  double level = 0.0;  // 𝒥(u)
  double lambda = 0.0; // Lagrange multiplier
  SolveResiduals residuals;
  FiberProfile fiber;
  SolveKind kind = SolveKind::local_min;
  std::int64_t iterations = 0;
  double wall_time = 0.0; // seconds; excluded from deterministic output
  EnergyBreakdown components;
};

struct SolveOptions {
  // Descent handoff tolerance on ‖projected gradient‖₂ / (1 + |level|).
  // Every solve finishes with constrained Newton steps that drive the
  // stationarity residual to round-off, so the descent only needs to land
  // in the Newton basin; values below 1e-6 are clamped to it.
  double tol_grad = 1e-8;
  double tol_P = 1e-6;        // on |P| / pohozaev_scale
  std::int64_t max_iter = 50000;
  double tau_init = 0.1;      // initial step, clamped to [1e-6, 1]
  bool precondition = true;   // H¹ (Sobolev) preconditioner
  std::string init = "gaussian"; // gaussian | exponential | profile
  RadialField init_profile;      // used when init == "profile"
  std::uint64_t seed = 0;
};

// Euler-Lagrange gradient G(u) = -Δu + Φ_u u - |u|^{p-2}u - μ|u|^{q-2}u,
// the L²(w) gradient of 𝒥.
RadialField el_gradient(const RadialField &u, const ProblemParams &prm);

// Dilates u to its fiber local minimum s_u (two-critical regime).
RadialField fiber_descend_init(const RadialField &u, const ProblemParams &prm);

SolveReport ground_state_local_min(const ProblemParams &prm, GridPtr grid,
                                   const SolveOptions &opts = {});

SolveReport mountain_pass(const ProblemParams &prm, GridPtr grid,
                          const SolveOptions &opts = {});

SolveReport critical_global_min(const ProblemParams &prm, GridPtr grid,
                                const SolveOptions &opts = {});

// Witness for the L²-critical dichotomy at a > a*: a mass-a profile w with
// negative reduced energy E₀(w) = ½|∇w|₂² - (1/p̄)|w|_p̄^p̄, together with the
// sampled fiber values 𝒥(s ⋆ w), which run to -∞.
struct DichotomyWitness {
  RadialField w;
  double E0 = 0.0;
  std::vector<double> s_samples;
  std::vector<double> J_samples;
};
DichotomyWitness critical_dichotomy_witness(const ProblemParams &prm,
                                            GridPtr grid, double s_max = 8.0,
                                            std::size_t n_samples = 17);

struct ContinuationStep {
  double parameter = 0.0; // μ or q value of this solve
  SolveReport report;
  double diff_h1 = 0.0; // H¹ distance to the previous step's profile
};

struct ContinuationResult {
  std::vector<ContinuationStep> steps;
};

// Mountain-pass continuation μ ∈ {μ₀, μ₀/2, ..., μ₀/2^{halvings}, 0}.
ContinuationResult continuation_mu_to_zero(const ProblemParams &prm,
                                           GridPtr grid, int halvings = 4,
                                           const SolveOptions &opts = {});

// Mountain-pass continuation q_k = 10/3 + (q_start - 10/3)/2^k, k = 0..halvings,
// followed by the direct critical solve at q = 10/3.
ContinuationResult continuation_q_to_critical(const ProblemParams &prm,
                                              GridPtr grid, int halvings = 4,
                                              const SolveOptions &opts = {});

} // namespace nsol
