#include "nsol/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "nsol/functionals.hpp"
#include "nsol/gn.hpp"
#include "nsol/operators.hpp"
#include "nsol/regime.hpp"

namespace nsol {

std::string to_string(SolveKind k) {
  switch (k) {
  case SolveKind::local_min: return "local-min";
  case SolveKind::mountain_pass: return "mountain-pass";
  default: return "global-min";
  }
}

RadialField el_gradient(const RadialField &u, const ProblemParams &prm) {
  prm.validate();
  const RadialGrid &g = *u.grid;
  RadialField lap = laplacian_radial(u);
  const std::vector<double> phi = hartree_potential(u);
  RadialField out(u.grid);
  out.real_valued = u.real_valued;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double m = std::abs(u.v[i]);
    const double foc_p = (m > 0.0) ? std::pow(m, prm.p - 2.0) : 0.0;
    const double foc_q = (m > 0.0) ? std::pow(m, prm.q - 2.0) : 0.0;
    out.v[i] = -lap.v[i] + (phi[i] - foc_p - prm.mu * foc_q) * u.v[i];
  }
  return out;
}

namespace {

double dot_w(const RadialField &a, const RadialField &b) {
  return inner(a, b).real();
}

// Removes the radial component along u from g, in the L²(w) metric.
void project_tangent(RadialField &g, const RadialField &u, double m2) {
  const double c = dot_w(g, u) / m2;
  for (std::size_t i = 0; i < g.v.size(); ++i) g.v[i] -= c * u.v[i];
}

// Solves (c - Δ)x = b through the tridiagonal system for V = r·x. The
// operator is symmetric positive definite in the weighted inner product,
// so the Thomas algorithm is stable here.
RadialField shifted_helmholtz_solve(const RadialField &b, double c) {
  const RadialGrid &g = *b.grid;
  const std::size_t n = g.n;
  std::vector<double> lower(n), diag(n), upper(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = g.w[i] / (4.0 * std::numbers::pi * g.r[i] * g.r[i]);
    diag[i] = c * m + 1.0 / g.d[i] + 1.0 / g.d[i + 1];
    lower[i] = -1.0 / g.d[i];
    upper[i] = -1.0 / g.d[i + 1];
    rhs[i] = m * g.r[i] * b.v[i].real();
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double f = lower[i] / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  RadialField x(b.grid);
  x.real_valued = true;
  for (std::size_t i = 0; i < n; ++i) x.v[i] = rhs[i] / g.r[i];
  return x;
}

RadialField make_init(GridPtr grid, const SolveOptions &opts, double a) {
  RadialField u(grid);
  if (opts.init == "gaussian") {
    u = sample_real(grid, [](double r) { return std::exp(-0.5 * r * r); });
  } else if (opts.init == "exponential") {
    u = sample_real(grid, [](double r) { return std::exp(-r); });
  } else if (opts.init == "profile") {
    if (opts.init_profile.grid == nullptr ||
        opts.init_profile.grid->n != grid->n)
      throw ParamError("init profile missing or on a mismatched grid");
    u = opts.init_profile;
    for (auto &z : u.v) z = std::abs(z);
  } else {
    throw ParamError("unknown init '" + opts.init +
                     "' (gaussian | exponential | profile)");
  }
  normalize_to_mass(u, a);
  return u;
}

void take_magnitude(RadialField &u) {
  for (auto &z : u.v) z = std::abs(z.real());
  u.real_valued = true;
}

// Removes from dir its component along the dilation orbit through u, i.e.
// along the generator (3/2)u + r·u'. The reduced level is constant on the
// orbit, so any step along it is pure gauge motion: it detunes the fiber
// offset without descending, and repaying that offset later costs a
// resampling. The generator is itself mass-tangent up to discretization,
// but project it anyway so the step stays exactly on the sphere's tangent.
void remove_orbit_component(RadialField &dir, const RadialField &u,
                            double m2) {
  RadialField gen = radial_derivative(u);
  const RadialGrid &g = *u.grid;
  for (std::size_t i = 0; i < g.n; ++i)
    gen.v[i] = 1.5 * u.v[i] + g.r[i] * gen.v[i];
  project_tangent(gen, u, m2);
  const double g2 = dot_w(gen, gen);
  if (!(g2 > 0.0)) return;
  axpy(dir, -dot_w(dir, gen) / g2, gen);
}

struct IterationData {
  EnergyBreakdown e;
  RadialField pg; // G(u) + λu, tangent to the sphere
  double pg_norm = 0.0;
  double lambda = 0.0;
  double P = 0.0;
  double P_scale = 0.0;
  bool feasible = true;
  double t_u = 0.0;   // fiber-maximum offset (reduced mode only)
  double kin_w = 1.0; // kinetic weight e^{2t_u} (reduced mode only)
  double dd_t = 0.0;  // fiber curvature at the maximum (reduced mode only)
};

IterationData evaluate(const RadialField &u, const ProblemParams &prm) {
  IterationData d{energy(u, prm), el_gradient(u, prm)};
  d.lambda = -dot_w(d.pg, u) / d.e.mass2;
  project_tangent(d.pg, u, d.e.mass2);
  d.pg_norm = std::sqrt(mass2(d.pg));
  d.P = pohozaev(d.e, prm);
  d.P_scale = pohozaev_scale(d.e, prm);
  return d;
}

// Reduced mountain evaluation. The iterate is treated as a shape; the level
// is the exact fiber maximum ψ_u(t_u), computed from the components without
// resampling, and the gradient is the matching scalar-weighted combination
// of the component gradients (the fiber maximum contributes nothing extra
// because ψ'(t_u) = 0). This keeps concentration in the scalar t_u instead
// of squeezing the grid representation.
IterationData evaluate_reduced(const RadialField &u, const ProblemParams &prm) {
  IterationData d{energy(u, prm), RadialField(u.grid)};
  const FiberComponents c{d.e.T, d.e.D, d.e.Pp, d.e.Qq, d.e.mass2};
  const FiberProfile fp = fiber_profile(c, prm);
  if (!std::isfinite(fp.t_u) || !(fp.dd_t < 0.0) || !(fp.psi_t > 0.0)) {
    d.feasible = false;
    return d;
  }
  d.t_u = fp.t_u;
  d.dd_t = fp.dd_t;
  d.e.J = fp.psi_t;

  const double cT = std::exp(2.0 * fp.t_u);
  const double cD = std::exp(fp.t_u);
  const double cP = std::exp(1.5 * (prm.p - 2.0) * fp.t_u);
  const double cQ = std::exp(1.5 * (prm.q - 2.0) * fp.t_u);
  d.kin_w = cT;

  const RadialGrid &g = *u.grid;
  RadialField lap = laplacian_radial(u);
  const std::vector<double> phi = hartree_potential(u);
  d.pg.real_valued = u.real_valued;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double m = std::abs(u.v[i]);
    const double foc_p = (m > 0.0) ? std::pow(m, prm.p - 2.0) : 0.0;
    const double foc_q = (m > 0.0) ? std::pow(m, prm.q - 2.0) : 0.0;
    d.pg.v[i] = -cT * lap.v[i] +
                (cD * phi[i] - cP * foc_p - prm.mu * cQ * foc_q) * u.v[i];
  }
  d.lambda = -dot_w(d.pg, u) / d.e.mass2;
  project_tangent(d.pg, u, d.e.mass2);
  // The reduced level is constant along the dilation orbit, so the exact
  // gradient has no orbit component; what the discrete one carries there is
  // quadrature defect, not descent information. Remove it so the norm below
  // measures convergence in the dilation quotient.
  remove_orbit_component(d.pg, u, d.e.mass2);
  d.pg_norm = std::sqrt(mass2(d.pg));
  // The shape's own constraint residual is ψ'(0), which vanishes exactly
  // when the shape sits at its fiber maximum (t_u = 0). Recentring drives
  // it there, so this is the honest counterpart of the plain P residual.
  d.P = pohozaev(d.e, prm);
  d.P_scale = pohozaev_scale(d.e, prm);
  return d;
}

SolveReport finish_report(const RadialField &u, const ProblemParams &prm,
                          const IterationData &d, SolveKind kind,
                          std::int64_t iterations, double wall_time) {
  SolveReport rep;
  rep.profile = u;
  rep.level = d.e.J;
  rep.lambda = d.lambda;
  rep.kind = kind;
  rep.iterations = iterations;
  rep.wall_time = wall_time;
  rep.components = d.e;
  rep.residuals.euler_lagrange_L2 = d.pg_norm / std::sqrt(d.e.mass2);
  rep.residuals.pohozaev_P = std::abs(d.P) / d.P_scale;
  rep.residuals.nehari = nehari_residual(u, d.lambda, prm);
  rep.residuals.pohozaev_identity =
      pohozaev_identity_residual(u, d.lambda, prm);
  rep.fiber = fiber_profile(u, prm);
  return rep;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

// Shared Armijo descent on the sphere. reduced switches the objective to the
// fiber-maximum level (mountain pass); rho0 > 0 enforces the gradient ball
// by step rejection (local minimum). Returns the converged iterate.
struct DescentConfig {
  bool reduced = false;
  double rho0 = 0.0; // 0 disables the ball constraint
  SolveKind kind = SolveKind::local_min;
  double grad_cap = 0.0;    // 0 disables the runaway guard
  double scale_guard = 0.0; // 0 disables; else max allowed √λ·h in flight
};

struct DescentOutcome {
  RadialField u;
  IterationData d;
  std::int64_t iterations = 0;
};

// Moves a reduced iterate onto its own fiber maximum by one resampling.
// Fails (returning false, leaving u and d untouched) if the dilated shape
// escapes the grid or loses its fiber structure.
bool try_recenter(RadialField &u, IterationData &d, double a,
                  const ProblemParams &prm) {
  RadialField rec = dilate(u, d.t_u);
  take_magnitude(rec);
  if (!(mass2(rec) > 0.0)) return false;
  normalize_to_mass(rec, a);
  IterationData dr = evaluate_reduced(rec, prm);
  if (!dr.feasible) return false;
  u = std::move(rec);
  d = std::move(dr);
  return true;
}

// Linearized Euler-Lagrange operator at a real field u with multiplier λ:
//   L x = -Δx + (λ + Φ_u - (p-1)|u|^{p-2} - μ(q-1)|u|^{q-2}) x
//         + 2 (|x|⁻¹ ∗ (u x)) u.
// Symmetric in the weighted inner product; the Hartree linearization reuses
// the same prefix/suffix Newton kernel as the potential itself.
RadialField apply_linearized(const RadialField &u,
                             const std::vector<double> &phi, double lambda,
                             const ProblemParams &prm, const RadialField &x) {
  const RadialGrid &g = *u.grid;
  RadialField out = laplacian_radial(x);
  std::vector<double> dens(g.n);
  for (std::size_t i = 0; i < g.n; ++i)
    dens[i] = u.v[i].real() * x.v[i].real();
  const std::vector<double> cross = newton_potential(g, dens);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double m = std::abs(u.v[i].real());
    const double fp = (m > 0.0) ? std::pow(m, prm.p - 2.0) : 0.0;
    const double fq = (m > 0.0) ? std::pow(m, prm.q - 2.0) : 0.0;
    out.v[i] = -out.v[i] +
               (lambda + phi[i] - (prm.p - 1.0) * fp -
                prm.mu * (prm.q - 1.0) * fq) *
                   x.v[i] +
               2.0 * cross[i] * u.v[i];
  }
  out.real_valued = true;
  return out;
}

// Preconditioned MINRES for the symmetric (indefinite) linearized system,
// with the positive definite shifted Helmholtz inverse as preconditioner.
// It captures the stiff part of the spectrum, the rest is a compact
// perturbation, so the preconditioned eigenvalues cluster and a few dozen
// iterations reach round-off in practice.
template <typename MatVec>
RadialField minres_solve(const MatVec &apply_A, const RadialField &b,
                         double shift, double rtol, std::int64_t max_it) {
  RadialField x(b.grid);
  x.real_valued = true;
  RadialField r1 = b;
  RadialField y = shifted_helmholtz_solve(r1, shift);
  double beta1 = dot_w(r1, y);
  if (!(beta1 > 0.0)) return x;
  beta1 = std::sqrt(beta1);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0;
  RadialField r2 = r1;
  RadialField w(b.grid), w2(b.grid);
  w.real_valued = w2.real_valued = true;
  for (std::int64_t it = 1; it <= max_it; ++it) {
    const double s = 1.0 / beta;
    RadialField v = y;
    for (auto &z : v.v) z *= s;
    y = apply_A(v);
    if (it >= 2) axpy(y, -beta / oldb, r1);
    const double alfa = dot_w(v, y);
    axpy(y, -alfa / beta, r2);
    r1 = r2;
    r2 = y;
    y = shifted_helmholtz_solve(r2, shift);
    oldb = beta;
    beta = dot_w(r2, y);
    if (!(beta >= 0.0)) break;
    beta = std::sqrt(beta);
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::sqrt(gbar * gbar + beta * beta);
    gamma = std::max(gamma, 1e-300);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    RadialField w1 = w2;
    w2 = w;
    w = v;
    axpy(w, -oldeps, w1);
    axpy(w, -delta, w2);
    for (auto &z : w.v) z /= gamma;
    axpy(x, phi, w);
    if (phibar <= rtol * beta1) break;
  }
  return x;
}

// Polishes a near-critical real iterate to the exact discrete constrained
// critical point. The quotient descent leaves two deliberate defects: the
// materializing resample error and the orbit component of the discrete
// gradient, which no amount of further descent removes because the reduced
// level carries no information along the orbit. Both sit inside the Newton
// basin. Each constrained Newton step solves the bordered system
//   L δ + δλ·u = -R,  ⟨u, δ⟩_w = 0
// through two MINRES solves (L x = -R and L y = u), combining them so the
// step stays tangent to the mass sphere.
void newton_polish(RadialField &u, const ProblemParams &prm, double a) {
  RadialField best = u;
  double best_res = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 10; ++step) {
    const IterationData d = evaluate(u, prm);
    if (d.pg_norm < best_res) {
      best = u;
      best_res = d.pg_norm;
    } else if (step > 0) {
      break; // contraction ended; keep the best iterate
    }
    if (d.pg_norm <=
        1e-12 * (1.0 + std::abs(d.lambda)) * std::sqrt(d.e.mass2))
      break;
    const std::vector<double> phi = hartree_potential(u);
    const double shift = 1.0 + std::abs(d.lambda);
    auto apply = [&](const RadialField &x) {
      return apply_linearized(u, phi, d.lambda, prm, x);
    };
    RadialField rhs = d.pg;
    for (auto &z : rhs.v) z = -z;
    const RadialField xs = minres_solve(apply, rhs, shift, 1e-12, 400);
    const RadialField ys = minres_solve(apply, u, shift, 1e-12, 400);
    const double uy = dot_w(u, ys);
    if (!(std::abs(uy) > 0.0)) break;
    RadialField delta = xs;
    axpy(delta, -dot_w(u, xs) / uy, ys);
    axpy(u, 1.0, delta);
    normalize_to_mass(u, a);
  }
  u = std::move(best);
  // Newton corrections are signed and can leave round-off-size negative
  // values in the far tail; the solutions themselves are positive, so
  // restore the sign without disturbing the residual.
  take_magnitude(u);
  normalize_to_mass(u, a);
}

DescentOutcome descend(RadialField u, const ProblemParams &prm,
                       const SolveOptions &opts, const DescentConfig &cfg) {
  const double a = prm.a;
  double tau = std::clamp(opts.tau_init, 1e-6, 1.0);
  std::int64_t consecutive_boundary = 0;
  std::int64_t grad_ok_streak = 0;
  std::int64_t iter = 0;

  IterationData d = cfg.reduced ? evaluate_reduced(u, prm) : evaluate(u, prm);
  if (!d.feasible)
    throw SolverError("initial field has no fiber maximum: regime violation");
  const bool trace = std::getenv("NSOL_TRACE") != nullptr;
  for (; iter < opts.max_iter; ++iter) {
    if (trace && iter % 100 == 0) {
      double cosg = 0.0;
      if (cfg.reduced) {
        RadialField gen = radial_derivative(u);
        for (std::size_t i = 0; i < u.grid->n; ++i)
          gen.v[i] = 1.5 * u.v[i] + u.grid->r[i] * gen.v[i];
        project_tangent(gen, u, d.e.mass2);
        const double g2 = dot_w(gen, gen);
        if (g2 > 0.0 && d.pg_norm > 0.0)
          cosg = dot_w(d.pg, gen) / (std::sqrt(g2) * d.pg_norm);
      }
      std::fprintf(stderr,
                   "nsol: it=%lld J=%.9g pg=%.3e Prel=%.3e lam=%.6g "
                   "t_u=%.3e dd=%.3e cosg=%+.4f tau=%.2e\n",
                   static_cast<long long>(iter), d.e.J, d.pg_norm,
                   std::abs(d.P) / d.P_scale, d.lambda, d.t_u, d.dd_t, cosg,
                   tau);
    }
    // The descent only needs to reach the Newton basin; the caller then
    // polishes the iterate to the exact discrete critical point, so the
    // handoff tolerance has a floor. Tightening tol_grad below it buys
    // nothing; loosening it hands off earlier.
    const double gtol = std::max(opts.tol_grad, 1e-6);
    const bool grad_ok = d.pg_norm <= gtol * (1.0 + std::abs(d.e.J));
    const bool P_ok = std::abs(d.P) <= opts.tol_P * d.P_scale;
    grad_ok_streak = grad_ok ? grad_ok_streak + 1 : 0;
    // |P| bottoms out at the discretization's own defect; once the gradient
    // has been converged for a while, accept that floor rather than spin.
    if (grad_ok && (cfg.reduced || P_ok || grad_ok_streak >= 100)) break;

    RadialField dir = d.pg;
    if (opts.precondition) {
      // In reduced mode the leading operator is kin_w·(-Δ); solve against it
      // so the step length stays O(1) regardless of the fiber offset.
      dir = shifted_helmholtz_solve(d.pg,
                                    (1.0 + std::abs(d.lambda)) / d.kin_w);
      if (d.kin_w != 1.0)
        for (auto &z : dir.v) z /= d.kin_w;
      project_tangent(dir, u, d.e.mass2);
    }
    if (cfg.reduced) remove_orbit_component(dir, u, d.e.mass2);
    double slope = dot_w(d.pg, dir);
    if (slope <= 0.0) {
      dir = d.pg;
      if (cfg.reduced) remove_orbit_component(dir, u, d.e.mass2);
      slope = dot_w(d.pg, dir);
      if (slope <= 0.0) {
        dir = d.pg;
        slope = dot_w(d.pg, d.pg);
      }
    }

    bool accepted = false;
    std::int64_t ball_rejects = 0, other_rejects = 0;
    tau = std::clamp(tau * 1.3, 1e-6, 1.0);
    for (; tau >= 1e-6; tau *= 0.5) {
      RadialField cand = u;
      axpy(cand, -tau, dir);
      take_magnitude(cand);
      normalize_to_mass(cand, a);
      if (cfg.rho0 > 0.0 && kinetic_energy(cand) > cfg.rho0 * cfg.rho0) {
        ++ball_rejects;
        continue;
      }
      const IterationData dc =
          cfg.reduced ? evaluate_reduced(cand, prm) : evaluate(cand, prm);
      if (!dc.feasible) {
        ++other_rejects;
        continue;
      }
      if (cfg.grad_cap > 0.0 && dc.e.T > cfg.grad_cap) {
        std::ostringstream oss;
        oss << "descent appears unbounded: |∇u|₂² grew to " << dc.e.T;
        throw SolverError(oss.str());
      }
      // Armijo with a round-off allowance so machine-level plateaus near
      // convergence do not read as failures.
      if (dc.e.J <=
          d.e.J - 1e-4 * tau * slope + 1e-15 * (1.0 + std::abs(d.e.J))) {
        u = cand;
        d = dc;
        accepted = true;
        break;
      }
      ++other_rejects;
    }

    if (!accepted) {
      if (ball_rejects > 0 && other_rejects == 0) {
        if (++consecutive_boundary >= 50) {
          std::ostringstream oss;
          oss << "iterate trapped at the gradient-ball boundary ρ0="
              << cfg.rho0 << " (mass may sit outside the two-branch window)";
          throw SolverError(oss.str());
        }
        continue;
      }
      // Line-search exhaustion near the floor of what the energy
      // differences can measure is a successful handoff, not a failure:
      // the Newton polish takes over from anywhere in its basin.
      if (d.pg_norm <= 1e-3 * (1.0 + std::abs(d.e.J))) break;
      std::ostringstream oss;
      oss << "line search stagnated at iteration " << iter
          << " (projected-gradient norm " << d.pg_norm << ", P residual "
          << std::abs(d.P) / d.P_scale << ")";
      throw SolverError(oss.str());
    }
    consecutive_boundary = 0;

    if (cfg.kind == SolveKind::mountain_pass && d.e.J < 0.0)
      throw SolverError(
          "descent level fell below zero: collapse onto the local branch");

    // The reduced multiplier equals the realized one (dilations preserve
    // mass), so concentration beyond the grid scale is visible in flight.
    // A negative fiber offset means the stored shape is narrower than the
    // realized one by e^{-t_u}, so guard the tighter of the two scales.
    if (cfg.scale_guard > 0.0 && d.lambda > 0.0) {
      const double h = u.grid->r_max / static_cast<double>(u.grid->n + 1);
      const double squeeze = std::exp(-std::min(d.t_u, 0.0));
      if (std::sqrt(d.lambda) * squeeze * h > cfg.scale_guard) {
        std::ostringstream oss;
        oss << "iterate concentrates at scale "
            << 1.0 / (std::sqrt(d.lambda) * squeeze)
            << ", below the grid resolution h=" << h
            << "; refine the grid or raise the mass";
        throw SolverError(oss.str());
      }
    }
  }

  if (iter >= opts.max_iter) {
    std::ostringstream oss;
    oss << "no convergence after " << opts.max_iter
        << " iterations (projected-gradient norm " << d.pg_norm
        << ", P residual " << std::abs(d.P) / d.P_scale << ")";
    throw SolverError(oss.str());
  }

  return DescentOutcome{std::move(u), std::move(d), iter};
}

} // namespace

RadialField fiber_descend_init(const RadialField &u, const ProblemParams &prm) {
  const FiberProfile fp = fiber_profile(u, prm);
  if (fp.regime != FiberRegime::two_critical || !std::isfinite(fp.s_u))
    return u;
  RadialField out = dilate(u, fp.s_u);
  take_magnitude(out);
  normalize_to_mass(out, std::sqrt(mass2(u)));
  return out;
}

SolveReport ground_state_local_min(const ProblemParams &prm, GridPtr grid,
                                   const SolveOptions &opts) {
  prm.validate();
  const double t0 = now_seconds();
  const ThresholdReport th = thresholds(prm);
  if (!th.two_branch_regime) {
    std::ostringstream oss;
    oss << "local minimizer requires μ>0, q∈(2,8/3), p∈(10/3,6); regime is "
        << to_string(classify_regime(prm, th));
    throw ParamError(oss.str());
  }
  if (!(prm.a < th.abar0)) {
    std::ostringstream oss;
    oss << "mass a=" << prm.a << " is not below the two-branch threshold ā0="
        << th.abar0 << " (a0=" << th.a0 << ", ρ0=" << th.rho0 << ")";
    throw ParamError(oss.str());
  }

  RadialField u = make_init(grid, opts, prm.a);
  u = fiber_descend_init(u, prm);
  if (kinetic_energy(u) > th.rho0 * th.rho0)
    throw SolverError("initialization landed outside the gradient ball");

  DescentConfig cfg;
  cfg.rho0 = th.rho0;
  cfg.kind = SolveKind::local_min;
  DescentOutcome out = descend(std::move(u), prm, opts, cfg);
  newton_polish(out.u, prm, prm.a);
  IterationData ds = evaluate(out.u, prm);
  return finish_report(out.u, prm, ds, SolveKind::local_min, out.iterations,
                       now_seconds() - t0);
}

SolveReport mountain_pass(const ProblemParams &prm, GridPtr grid,
                          const SolveOptions &opts) {
  prm.validate();
  const double t0 = now_seconds();
  const ThresholdReport th = thresholds(prm);

  const bool subcritical_q = prm.mu > 0.0 && prm.q > 2.0 &&
                             prm.q <= 12.0 / 5.0 + 1e-12 &&
                             th.two_branch_regime && prm.a < th.abar0 &&
                             th.cond_k3;
  const bool defocusing = prm.mu <= 0.0 && prm.q > 2.0 &&
                          prm.q < 8.0 / 3.0 &&
                          prm.p > kCriticalExponent + 1e-12 && prm.p < 6.0;
  const bool critical_q = prm.mu > 0.0 &&
                          std::abs(prm.q - kCriticalExponent) < 1e-12 &&
                          prm.p > kCriticalExponent + 1e-12 && prm.p < 6.0 &&
                          th.cond_k201;
  const bool supercritical_q = prm.mu > 0.0 &&
                               prm.q > kCriticalExponent + 1e-12 &&
                               prm.q < prm.p && prm.p < 6.0 && th.cond_k201;
  if (!(subcritical_q || defocusing || critical_q || supercritical_q)) {
    std::ostringstream oss;
    oss << "mountain pass requires one of: μ>0 with q∈(2,12/5], a<ā0 and the "
           "(a,p) mass bound; μ≤0 with q∈(2,8/3); q=10/3 or 10/3<q<p with "
           "the critical-q mass bound; regime is "
        << to_string(classify_regime(prm, th));
    throw ParamError(oss.str());
  }

  RadialField u = make_init(grid, opts, prm.a);

  DescentConfig cfg;
  cfg.reduced = true;
  cfg.kind = SolveKind::mountain_pass;
  cfg.scale_guard = 0.7;
  DescentOutcome out = descend(std::move(u), prm, opts, cfg);

  // The descent converges in the dilation quotient, leaving the fiber
  // offset as a scalar. Materialize it with one resampling, then polish
  // away both the resample error and the quotient's orbit defect with
  // constrained Newton steps on the full stationarity system.
  if (std::abs(out.d.t_u) > 1e-13 &&
      !try_recenter(out.u, out.d, prm.a, prm))
    throw SolverError("converged shape lost its fiber maximum on recentring");
  newton_polish(out.u, prm, prm.a);

  // Re-evaluate with the plain functional so the report measures the
  // actual field.
  IterationData ds = evaluate(out.u, prm);

  // An under-resolved spike can be a perfectly quiet discrete critical
  // point, so check the physical scale directly: the multiplier sets the
  // decay rate √λ, and the grid must resolve that length.
  const double h = grid->r_max / static_cast<double>(grid->n + 1);
  if (ds.lambda > 0.0 && std::sqrt(ds.lambda) * h > 0.35) {
    std::ostringstream oss;
    oss << "maximizer concentrates at scale " << 1.0 / std::sqrt(ds.lambda)
        << ", below the grid resolution h=" << h
        << "; refine the grid or raise the mass";
    throw SolverError(oss.str());
  }

  return finish_report(out.u, prm, ds, SolveKind::mountain_pass,
                       out.iterations, now_seconds() - t0);
}

SolveReport critical_global_min(const ProblemParams &prm, GridPtr grid,
                                const SolveOptions &opts) {
  prm.validate();
  const double t0 = now_seconds();
  if (std::abs(prm.p - kCriticalExponent) > 1e-12)
    throw ParamError("global minimization requires the critical power p=10/3");
  if (!(prm.mu > 0.0) || !(prm.q > 2.0) || !(prm.q < 8.0 / 3.0))
    throw ParamError(
        "global minimization requires μ>0 and q∈(2,8/3) at p=10/3");
  const ThresholdReport th = thresholds(prm);
  if (!(prm.a <= th.a_star)) {
    std::ostringstream oss;
    oss << "mass a=" << prm.a << " exceeds the critical threshold a*="
        << th.a_star << ": the constrained infimum is -∞";
    throw ParamError(oss.str());
  }

  RadialField u = make_init(grid, opts, prm.a);
  {
    const FiberProfile fp = fiber_profile(u, prm);
    if (fp.regime == FiberRegime::two_critical && std::isfinite(fp.s_u)) {
      u = dilate(u, fp.s_u);
      take_magnitude(u);
      normalize_to_mass(u, prm.a);
    }
  }

  DescentConfig cfg;
  cfg.kind = SolveKind::global_min;
  cfg.grad_cap = 1e6 * std::max(1.0, kinetic_energy(u));
  DescentOutcome out = descend(std::move(u), prm, opts, cfg);
  newton_polish(out.u, prm, prm.a);
  IterationData ds = evaluate(out.u, prm);
  return finish_report(out.u, prm, ds, SolveKind::global_min,
                       out.iterations, now_seconds() - t0);
}

DichotomyWitness critical_dichotomy_witness(const ProblemParams &prm,
                                            GridPtr grid, double s_max,
                                            std::size_t n_samples) {
  prm.validate();
  if (std::abs(prm.p - kCriticalExponent) > 1e-12)
    throw ParamError("the dichotomy witness lives at the critical power p=10/3");
  if (n_samples < 2) throw ParamError("need at least two fiber samples");

  // The optimal interpolation shape: the soliton at the critical power,
  // rescaled to the requested mass. Its reduced energy E0 = T/2 - Pp/p turns
  // negative exactly above the critical mass.
  GNSoliton sol = solve_soliton(kCriticalExponent, 1e-10);
  const double c_tail = sol.profile.v[sol.profile.size() - 1].real() *
                        sol.profile.grid->r[sol.profile.size() - 1] *
                        std::exp(sol.profile.grid->r[sol.profile.size() - 1]);
  const RadialGrid &sg = *sol.profile.grid;
  DichotomyWitness wit;
  wit.w = sample_real(grid, [&](double r) -> double {
    if (r >= sg.r_max) return c_tail * std::exp(-r) / r;
    const double x = r / sg.r[0];
    const std::size_t i = static_cast<std::size_t>(x);
    if (i == 0) return sol.profile.v[0].real();
    if (i + 1 >= sg.n) return sol.profile.v[sg.n - 1].real();
    const double frac = x - static_cast<double>(i);
    return (1.0 - frac) * sol.profile.v[i - 1].real() +
           frac * sol.profile.v[i].real();
  });
  normalize_to_mass(wit.w, prm.a);

  const EnergyBreakdown e = energy(wit.w, prm);
  wit.E0 = 0.5 * e.T - e.Pp / prm.p;
  const FiberComponents c{e.T, e.D, e.Pp, e.Qq, e.mass2};
  wit.s_samples.resize(n_samples);
  wit.J_samples.resize(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double s =
        s_max * static_cast<double>(k) / static_cast<double>(n_samples - 1);
    wit.s_samples[k] = s;
    wit.J_samples[k] = fiber_value(c, prm, s);
  }
  return wit;
}

namespace {

ContinuationStep solve_step(const ProblemParams &prm, GridPtr grid,
                            const SolveOptions &opts, double parameter,
                            const RadialField *warm) {
  SolveOptions o = opts;
  if (warm != nullptr) {
    o.init = "profile";
    o.init_profile = *warm;
  }
  ContinuationStep step;
  step.parameter = parameter;
  step.report = mountain_pass(prm, grid, o);
  if (warm != nullptr) {
    RadialField diff = step.report.profile;
    axpy(diff, -1.0, *warm);
    step.diff_h1 = std::sqrt(h1_norm2(diff));
  }
  return step;
}

} // namespace

ContinuationResult continuation_mu_to_zero(const ProblemParams &prm,
                                           GridPtr grid, int halvings,
                                           const SolveOptions &opts) {
  prm.validate();
  if (!(prm.mu > 0.0))
    throw ParamError("μ-continuation starts from a focusing μ > 0");
  ContinuationResult res;
  ProblemParams p = prm;
  const RadialField *warm = nullptr;
  for (int k = 0; k <= halvings + 1; ++k) {
    p.mu = (k <= halvings) ? prm.mu / std::pow(2.0, k) : 0.0;
    res.steps.push_back(solve_step(p, grid, opts, p.mu, warm));
    warm = &res.steps.back().report.profile;
  }
  return res;
}

ContinuationResult continuation_q_to_critical(const ProblemParams &prm,
                                              GridPtr grid, int halvings,
                                              const SolveOptions &opts) {
  prm.validate();
  if (!(prm.q > kCriticalExponent))
    throw ParamError("q-continuation starts from q > 10/3");
  ContinuationResult res;
  ProblemParams p = prm;
  const RadialField *warm = nullptr;
  for (int k = 0; k <= halvings + 1; ++k) {
    p.q = (k <= halvings)
              ? kCriticalExponent +
                    (prm.q - kCriticalExponent) / std::pow(2.0, k)
              : kCriticalExponent;
    res.steps.push_back(solve_step(p, grid, opts, p.q, warm));
    warm = &res.steps.back().report.profile;
  }
  return res;
}

} // namespace nsol
