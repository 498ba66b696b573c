// Gagliardo-Nirenberg machinery: for 2 < t < 6 and u ∈ H¹(ℝ³),
//
//   |u|_t ≤ C_t |u|₂^{1-γ_t} |∇u|₂^{γ_t},   γ_t = 3(t-2)/(2t),
//
// with sharp constant
//
//   C_t^t = (2t/(6-t)) · ((6-t)/(3(t-2)))^{3(t-2)/4} / |Q_t|₂^{t-2},
//
// where Q_t is the unique positive radial solution of -ΔQ + Q = |Q|^{t-2}Q,
// computed here by shooting on Q″ + (2/r)Q′ - Q + Q^{t-1} = 0 with Q′(0) = 0.
// Solved constants are cached on disk keyed by (t, tol); the cache directory
// is taken from NORM_SOLITON_CACHE_DIR or defaults to .cache-norm-soliton.
#pragma once

#include "nsol/field.hpp"

#include <string>

namespace nsol {

struct GNSoliton {
  double t = 0.0;
  RadialField profile;   // Q_t on a fine uniform grid
  double mass2 = 0.0;    // |Q_t|₂²
  double C_t_pow = 0.0;  // C_t^t
  double Q0 = 0.0;       // shooting amplitude Q_t(0)
  double residual = 0.0; // relative L² residual of -ΔQ + Q - Q^{t-1}
};

// Solves the soliton profile by adaptive-bracket bisection shooting.
// Throws ParamError for t outside (2, 6), SolverError with bracket
// diagnostics if no sign change is found.
GNSoliton solve_soliton(double t, double tol = 1e-10);

// C_t^t through the closed formula, using the cached soliton mass when
// available and solving (then caching) otherwise.
double gn_constant_pow(double t, double tol = 1e-10);

// Cache controls (exposed for tests).
std::string gn_cache_dir();
bool gn_cache_lookup(double t, double tol, double *mass2, double *C_t_pow,
                     double *Q0, double *residual);
void gn_cache_store(const GNSoliton &s, double tol);

} // namespace nsol
