#include "nsol/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nsol {

namespace {

constexpr double kPi = std::numbers::pi;

// Boundary-padded samples of v = r*u with v(0) = 0 and v(r_max) = 0.
// Index k in [0, n+1] refers to face nodes {0, r_1, ..., r_n, r_max}.
inline cplx v_at(const RadialField &u, std::size_t k) {
  if (k == 0 || k == u.grid->n + 1) return 0.0;
  return u.grid->r[k - 1] * u.v[k - 1];
}

} // namespace

double kinetic_energy(const RadialField &u) {
  const RadialGrid &g = *u.grid;
  double s = 0.0;
  for (std::size_t k = 0; k <= g.n; ++k) {
    const cplx dv = v_at(u, k + 1) - v_at(u, k);
    s += std::norm(dv) / g.d[k];
  }
  return 4.0 * kPi * s;
}

RadialField laplacian_radial(const RadialField &u) {
  const RadialGrid &g = *u.grid;
  RadialField out(u.grid);
  out.real_valued = u.real_valued;
  for (std::size_t i = 0; i < g.n; ++i) {
    const std::size_t k = i + 1; // face index of node i
    const cplx flux_r = (v_at(u, k + 1) - v_at(u, k)) / g.d[k];
    const cplx flux_l = (v_at(u, k) - v_at(u, k - 1)) / g.d[k - 1];
    out.v[i] = 4.0 * kPi * g.r[i] / g.w[i] * (flux_r - flux_l);
  }
  return out;
}

std::vector<double> newton_potential(const RadialGrid &g,
                                     const std::vector<double> &density) {
  const std::size_t n = g.n;
  if (density.size() != n)
    throw ParamError("density sample count does not match grid");
  // Newton kernel against a radial density: min(1/r_i, 1/r_j) splits into a
  // prefix sum (mass inside r_i, seen as 1/r_i) and a suffix sum (shells
  // outside r_i, each seen at its own 1/r_j).
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = g.w[i] * density[i];
  std::vector<double> phi(n);
  double prefix = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    prefix += rho[i];
    phi[i] = prefix / g.r[i];
  }
  double suffix = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    phi[i] += suffix;
    suffix += rho[i] / g.r[i];
  }
  return phi;
}

std::vector<double> hartree_potential(const RadialField &u) {
  const RadialGrid &g = *u.grid;
  std::vector<double> density(g.n);
  for (std::size_t i = 0; i < g.n; ++i) density[i] = std::norm(u.v[i]);
  return newton_potential(g, density);
}

double double_energy(const RadialField &u, const std::vector<double> &phi_u) {
  const RadialGrid &g = *u.grid;
  if (phi_u.size() != g.n)
    throw ParamError("potential sample count does not match grid");
  double s = 0.0;
  for (std::size_t i = 0; i < g.n; ++i)
    s += g.w[i] * phi_u[i] * std::norm(u.v[i]);
  return s;
}

double double_energy(const RadialField &u) {
  return double_energy(u, hartree_potential(u));
}

RadialField dilate(const RadialField &u, double s) {
  const RadialGrid &g = *u.grid;
  const std::size_t n = g.n;
  const double es = std::exp(s);
  const double amp = std::exp(1.5 * s);

  // Extended node axis: two even-reflection ghosts across r = 0 and two
  // zero-value ghosts at and beyond r_max. Cubic Lagrange on 4 consecutive
  // extended nodes gives O(h^4) resampling for smooth radial fields.
  std::vector<double> X(n + 4);
  std::vector<cplx> Y(n + 4);
  X[0] = -g.r[1];
  Y[0] = u.v[1];
  X[1] = -g.r[0];
  Y[1] = u.v[0];
  for (std::size_t i = 0; i < n; ++i) {
    X[i + 2] = g.r[i];
    Y[i + 2] = u.v[i];
  }
  X[n + 2] = g.r_max;
  Y[n + 2] = 0.0;
  X[n + 3] = 2.0 * g.r_max - g.r[n - 1];
  Y[n + 3] = 0.0;

  RadialField out(u.grid);
  out.real_valued = u.real_valued;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = es * g.r[i];
    if (x >= g.r_max) {
      out.v[i] = 0.0;
      continue;
    }
    // Locate the bracketing interval in the extended axis, then center a
    // 4-node stencil on it.
    const auto it = std::upper_bound(X.begin(), X.end(), x);
    std::size_t j = static_cast<std::size_t>(it - X.begin());
    if (j < 2) j = 2;
    if (j > n + 2) j = n + 2;
    const std::size_t s0 = j - 2;
    cplx acc = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      double lw = 1.0;
      for (std::size_t l = 0; l < 4; ++l)
        if (l != m) lw *= (x - X[s0 + l]) / (X[s0 + m] - X[s0 + l]);
      acc += lw * Y[s0 + m];
    }
    out.v[i] = amp * acc;
  }
  return out;
}

RadialField radial_derivative(const RadialField &u) {
  const RadialGrid &g = *u.grid;
  const std::size_t n = g.n;
  RadialField out(u.grid);
  out.real_valued = u.real_valued;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i + 1;
    const double span = (k + 1 <= n ? g.r[k] : g.r_max) -
                        (k >= 2 ? g.r[k - 2] : 0.0);
    const cplx dv = (v_at(u, k + 1) - v_at(u, k - 1)) / span;
    out.v[i] = (dv - u.v[i]) / g.r[i];
  }
  return out;
}

cplx h1_inner(const RadialField &a, const RadialField &b) {
  const RadialGrid &g = *a.grid;
  if (b.grid->n != g.n) throw ParamError("H1 inner requires matching grids");
  cplx s = inner(a, b);
  cplx grad = 0.0;
  for (std::size_t k = 0; k <= g.n; ++k) {
    const cplx da = v_at(a, k + 1) - v_at(a, k);
    const cplx db = v_at(b, k + 1) - v_at(b, k);
    grad += std::conj(da) * db / g.d[k];
  }
  return s + 4.0 * kPi * grad;
}

double h1_norm2(const RadialField &u) {
  return mass2(u) + kinetic_energy(u);
}

} // namespace nsol
