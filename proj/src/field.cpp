#include "nsol/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nsol {

RadialField::RadialField(GridPtr g, cplx fill)
    : grid(std::move(g)), v(grid ? grid->n : 0, fill),
      real_valued(fill.imag() == 0.0) {
  if (!grid) throw ParamError("field requires a grid");
}

void RadialField::check() const {
  if (!grid) throw ParamError("field has no grid");
  if (v.size() != grid->n)
    throw ParamError("field sample count does not match its grid");
  for (const cplx &z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NumericError("field contains a non-finite sample");
}

double mass2(const RadialField &u) {
  const RadialGrid &g = *u.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) s += g.w[i] * std::norm(u.v[i]);
  return s;
}

double lp_norm_pow(const RadialField &u, double t) {
  if (!(t > 0.0)) throw ParamError("Lebesgue exponent must be positive");
  const RadialGrid &g = *u.grid;
  double s = 0.0;
  if (t == 2.0) return mass2(u);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double m = std::abs(u.v[i]);
    if (m > 0.0) s += g.w[i] * std::pow(m, t);
  }
  return s;
}

cplx inner(const RadialField &a, const RadialField &b) {
  if (a.grid != b.grid && (a.grid->n != b.grid->n))
    throw ParamError("inner product requires matching grids");
  const RadialGrid &g = *a.grid;
  cplx s = 0.0;
  for (std::size_t i = 0; i < g.n; ++i)
    s += g.w[i] * std::conj(a.v[i]) * b.v[i];
  return s;
}

void normalize_to_mass(RadialField &u, double a) {
  if (!(a > 0.0)) throw ParamError("target mass must be positive");
  const double m = mass2(u);
  if (!(m > 0.0)) throw NumericError("cannot normalize a zero field");
  const double c = a / std::sqrt(m);
  for (cplx &z : u.v) z *= c;
}

RadialField sample_real(GridPtr g, const std::function<double(double)> &f) {
  RadialField u(std::move(g));
  for (std::size_t i = 0; i < u.grid->n; ++i) u.v[i] = f(u.grid->r[i]);
  u.real_valued = true;
  return u;
}

void axpy(RadialField &u, cplx c, const RadialField &w) {
  if (u.v.size() != w.v.size())
    throw ParamError("axpy requires matching field sizes");
  for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] += c * w.v[i];
  if (c.imag() != 0.0 || !w.real_valued) u.real_valued = false;
}

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

} // namespace

void write_profile_csv(const std::string &path, const RadialField &u) {
  const RadialGrid &g = *u.grid;
  nlohmann::ordered_json hdr;
  hdr["n"] = g.n;
  hdr["r_max"] = g.r_max;
  hdr["spacing"] = to_string(g.spacing);
  std::ofstream out(path);
  if (!out) throw ParamError("cannot open '" + path + "' for writing");
  out << "# " << hdr.dump() << "\n";
  out << "r,re,im\n";
  for (std::size_t i = 0; i < g.n; ++i)
    out << fmt17(g.r[i]) << ',' << fmt17(u.v[i].real()) << ','
        << fmt17(u.v[i].imag()) << "\n";
  if (!out) throw ParamError("write failed for '" + path + "'");
}

RadialField read_profile_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line.size() < 3 || line[0] != '#')
    throw ParamError("profile file '" + path + "' lacks a grid header");
  nlohmann::json hdr;
  try {
    hdr = nlohmann::json::parse(line.substr(1));
  } catch (const nlohmann::json::exception &e) {
    throw ParamError("bad grid header in '" + path + "': " + e.what());
  }
  if (!hdr.contains("n") || !hdr.contains("r_max") || !hdr.contains("spacing"))
    throw ParamError("grid header in '" + path + "' is incomplete");
  GridPtr g = make_grid(hdr["r_max"].get<double>(), hdr["n"].get<std::size_t>(),
                        spacing_from_string(hdr["spacing"].get<std::string>()));
  RadialField u(g);
  if (!std::getline(in, line))
    throw ParamError("profile file '" + path + "' truncated at column row");
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= g->n) throw ParamError("profile file '" + path + "' has too many rows");
    double r = 0.0, re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &r, &re, &im) != 3)
      throw ParamError("unparseable row in '" + path + "': " + line);
    if (std::abs(r - g->r[i]) > 1e-12 * (1.0 + std::abs(g->r[i])))
      throw ParamError("node mismatch in '" + path + "'");
    u.v[i] = cplx(re, im);
    if (im != 0.0) u.real_valued = false;
    ++i;
  }
  if (i != g->n)
    throw ParamError("profile file '" + path + "' has too few rows");
  return u;
}

} // namespace nsol
