// Differential and convolution operators on radial fields.
//
// The Laplacian uses the substitution v = r·u (so Δu = v″/r away from the
// origin) in flux form: with face widths d_k and v_0 = v_{n+1} = 0,
//
//   (Δu)_i = (4π r_i / w_i) · [ (v_{i+1}-v_i)/d_i - (v_i-v_{i-1})/d_{i-1} ].
//
// The weight factor makes ⟨Δu, φ⟩_w = ⟨u, Δφ⟩_w exact for any grid, and the
// kinetic functional below equals -⟨u, Δu⟩_w identically, so the energy, its
// gradient, and the operator are mutually consistent.
//
// The Hartree potential is the quadrature of the spherically averaged Newton
// kernel: Φ_u(r_i) = Σ_j w_j |u_j|² min(1/r_i, 1/r_j), evaluated in O(n) with
// prefix/suffix sums. Beyond the support of u this is exactly mass²(u)/r, the
// infinite-domain far field of the truncated density.
#pragma once

#include "nsol/field.hpp"

namespace nsol {

// |∇u|₂² = 4π Σ_k |v_{k+1} - v_k|² / d_k, v = r·u with zero boundary values.
double kinetic_energy(const RadialField &u);

// Second-order radial Laplacian with Dirichlet condition at r_max and the
// v(0) = 0 regularity condition at the origin.
RadialField laplacian_radial(const RadialField &u);

// Newton-kernel convolution (|x|⁻¹ ∗ f)(r_i) = Σ_j w_j f_j min(1/r_i, 1/r_j)
// for a real radial density given as node samples.
std::vector<double> newton_potential(const RadialGrid &g,
                                     const std::vector<double> &density);

// Φ_u(r) = (|x|⁻¹ ∗ |u|²)(r) ≥ 0, as node samples.
std::vector<double> hartree_potential(const RadialField &u);

// D(u) = ∫∫ |u(x)|²|u(y)|²/|x-y| dx dy = Σ w_i Φ_u(r_i) |u_i|² ≥ 0.
double double_energy(const RadialField &u);
double double_energy(const RadialField &u, const std::vector<double> &phi_u);

// Mass-preserving dilation (s ⋆ u)(x) = e^{3s/2} u(e^s x), resampled onto the
// original grid with 4-point Lagrange interpolation (even extension across
// r = 0, zero beyond r_max).
RadialField dilate(const RadialField &u, double s);

// Radial derivative ∂_r u via (v' - u)/r with centered differences on v = r·u.
RadialField radial_derivative(const RadialField &u);

// H¹ inner product ⟨u, w⟩_{L²} + ⟨∇u, ∇w⟩_{L²} (faces), and its norm squared.
cplx h1_inner(const RadialField &a, const RadialField &b);
double h1_norm2(const RadialField &u);

} // namespace nsol
