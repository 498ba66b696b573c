#include "nsol/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nsol {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

std::string to_string(Spacing s) {
  return s == Spacing::uniform ? "uniform" : "graded";
}

Spacing spacing_from_string(const std::string &s) {
  if (s == "uniform") return Spacing::uniform;
  if (s == "graded") return Spacing::graded;
  throw ParamError("unknown grid spacing '" + s + "'");
}

double RadialGrid::ball_volume(double R) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (r[i] <= R) s += w[i];
  return s;
}

GridPtr make_grid(double r_max, std::size_t n, Spacing spacing) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    std::ostringstream oss;
    oss << "grid radius must be positive and finite, got " << r_max;
    throw ParamError(oss.str());
  }
  if (n < 16) {
    std::ostringstream oss;
    oss << "grid needs at least 16 interior nodes, got " << n;
    throw ParamError(oss.str());
  }

  auto g = std::make_shared<RadialGrid>();
  g->r_max = r_max;
  g->n = n;
  g->spacing = spacing;
  g->r.resize(n);
  g->w.resize(n);
  g->d.resize(n + 1);

  if (spacing == Spacing::uniform) {
    // Composite trapezoid on [0, r_max] for integrands carrying the 4πr²
    // volume factor. Both endpoint values vanish for admissible fields
    // (r² kills the origin, the boundary condition kills r_max), so the
    // interior nodes each carry the full panel width h. Keeping the weights
    // exactly proportional to r² also keeps the weighted difference
    // operator an unperturbed second difference of r·u.
    const double h = r_max / static_cast<double>(n + 1);
    for (std::size_t i = 0; i < n; ++i)
      g->r[i] = static_cast<double>(i + 1) * h;
    for (std::size_t i = 0; i < n; ++i)
      g->w[i] = 4.0 * kPi * h * g->r[i] * g->r[i];
  } else {
    // Quadratic grading clusters nodes near the origin.
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i + 1) / static_cast<double>(n + 1);
      g->r[i] = r_max * x * x;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double left = (i == 0) ? 0.0 : g->r[i - 1];
      const double right = (i + 1 == n) ? r_max : g->r[i + 1];
      g->w[i] = 4.0 * kPi * g->r[i] * g->r[i] * 0.5 * (right - left);
    }
  }

  g->d[0] = g->r[0];
  for (std::size_t k = 1; k < n; ++k) g->d[k] = g->r[k] - g->r[k - 1];
  g->d[n] = r_max - g->r[n - 1];
  for (std::size_t k = 0; k <= n; ++k)
    if (!(g->d[k] > 0.0)) throw NumericError("degenerate grid face");

  return g;
}

double integrate(const RadialGrid &g, const std::vector<double> &samples) {
  if (samples.size() != g.n)
    throw ParamError("sample count does not match grid size");
  double s = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) s += g.w[i] * samples[i];
  return s;
}

} // namespace nsol
