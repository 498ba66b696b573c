// Radial discretization of ℝ³ on a truncated domain [0, r_max].
//
// A grid holds n interior nodes 0 < r_1 < ... < r_n < r_max together with
// positive quadrature weights w_i approximating ∫₀^{r_max} 4πr² (·) dr.
// Fields satisfy a Dirichlet condition at r_max, and the virtual node at
// r = 0 carries v = r·u = 0, so both boundary values are implicit.
//
// Uniform grids use r_i = i·h with h = r_max/(n+1) and trapezoid weights
// 4πh·r_i². Because both endpoint values of the weighted integrand vanish,
// this is the full composite trapezoid rule, second order for smooth decaying
// fields and spectrally accurate once the field has decayed below truncation
// level before r_max. The weights stay exactly proportional to r² so that
// the weighted flux form of the Laplacian reduces to an unperturbed second
// difference of v = r·u. Graded grids cluster nodes near the origin and use
// plain nonuniform trapezoid weights.
#pragma once

#include "nsol/errors.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace nsol {

enum class Spacing { uniform, graded };

std::string to_string(Spacing s);
Spacing spacing_from_string(const std::string &s);

struct RadialGrid {
  double r_max = 0.0;
  std::size_t n = 0;
  Spacing spacing = Spacing::uniform;
  std::vector<double> r; // nodes, size n, strictly increasing, in (0, r_max)
  std::vector<double> w; // quadrature weights, size n, all positive
  std::vector<double> d; // face widths, size n+1: d[k] = r_{k+1} - r_k with
                         // r_0 := 0 and r_{n+1} := r_max

  // Volume of the ball of radius R as seen by the quadrature (sum of weights
  // of nodes with r_i <= R).
  double ball_volume(double R) const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

// Builds a grid. Throws ParamError for r_max <= 0 or n < 16.
GridPtr make_grid(double r_max, std::size_t n,
                  Spacing spacing = Spacing::uniform);

// Integrates a real sample vector against the weights.
double integrate(const RadialGrid &g, const std::vector<double> &samples);

} // namespace nsol
