// Complex radial fields sampled on a RadialGrid. A field models a function
// u ∈ H¹ of |x| on ℝ³, truncated with u(r_max) = 0.
#pragma once

#include "nsol/grid.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace nsol {

using cplx = std::complex<double>;

struct RadialField {
  GridPtr grid;
  std::vector<cplx> v;     // samples u(r_i), size grid->n
  bool real_valued = true; // parity flag: imaginary parts identically zero

  RadialField() = default;
  explicit RadialField(GridPtr g, cplx fill = {0.0, 0.0});

  std::size_t size() const { return v.size(); }

  // Throws ParamError on grid/size mismatch, NumericError on non-finite data.
  void check() const;
};

// Σ w_i |u_i|², the squared L² norm over ℝ³.
double mass2(const RadialField &u);

// Σ w_i |u_i|^t for t > 0 (the L^t norm raised to the t-th power).
double lp_norm_pow(const RadialField &u, double t);

// Weighted complex inner product ⟨u, w⟩ = Σ w_i conj(u_i) w_i.
cplx inner(const RadialField &a, const RadialField &b);

// Rescales u in place so that mass2(u) = a². Throws ParamError if u = 0.
void normalize_to_mass(RadialField &u, double a);

// Builds a field by sampling f(r) on the grid.
RadialField sample_real(GridPtr g, const std::function<double(double)> &f);

// In-place u += c*w on a shared grid.
void axpy(RadialField &u, cplx c, const RadialField &w);

// Serialization: a one-line JSON grid header (prefixed "# ") followed by CSV
// columns r,re,im with round-trip-exact formatting.
void write_profile_csv(const std::string &path, const RadialField &u);
RadialField read_profile_csv(const std::string &path);

} // namespace nsol
