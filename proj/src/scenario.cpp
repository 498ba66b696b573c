#include "nsol/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "nsol/dynamics.hpp"
#include "nsol/gn.hpp"
#include "nsol/regime.hpp"
#include "nsol/version.hpp"

namespace nsol {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fnv1a_hex(const std::string &bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

const std::vector<std::string> &task_names() {
  static const std::vector<std::string> names = {
      "gn",     "thresholds", "fiber",       "ground",      "mountain",
      "evolve", "stability",  "instability", "sweep"};
  return names;
}

json default_options(const std::string &task) {
  json o = json::object();
  if (task == "gn") {
    o["t"] = kCriticalExponent;
    o["tol"] = 1e-10;
  } else if (task == "fiber") {
    o["s_min"] = -20.0;
    o["s_max"] = 20.0;
    o["lattice"] = 0.05;
    o["plot_min"] = -4.0;
    o["plot_max"] = 4.0;
    o["plot_samples"] = 161;
  } else if (task == "evolve") {
    o["init"] = "ground";
    o["rho"] = 0.0;
    o["T"] = 5.0;
    o["dt"] = 1e-3;
    o["scheme"] = "strang";
    o["sample_every"] = 10;
    o["free_flow"] = false;
    o["blowup_guard"] = 20.0;
  } else if (task == "stability") {
    o["n_perturbations"] = 8;
    o["delta"] = 1e-3;
    o["T"] = 20.0;
    o["dt"] = 1e-3;
    o["scheme"] = "strang";
    o["sample_every"] = 10;
    o["blowup_guard"] = 20.0;
  } else if (task == "instability") {
    o["rho"] = 0.1;
    o["T"] = 20.0;
    o["dt"] = 1e-3;
    o["scheme"] = "strang";
    o["sample_every"] = 10;
    o["blowup_guard"] = 20.0;
  } else if (task == "sweep") {
    o["a_values"] = json::array({0.2, 0.4, 0.6, 0.8});
    o["mu_values"] = json::array({0.0, 0.5, 1.0});
    o["workers"] = 4;
  }
  return o;
}

json default_config(const std::string &task) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["task"] = task;
  j["output_dir"] = "out/" + task;
  j["seed"] = 0;
  j["prm"] = {{"a", 0.5}, {"mu", 1.0}, {"p", 4.0}, {"q", 2.2}};
  j["grid"] = {{"n", 1024}, {"r_max", 40.0}, {"spacing", "uniform"}};
  j["solver"] = {{"tol_grad", 1e-8}, {"tol_P", 1e-6},
                 {"max_iter", 50000}, {"tau_init", 0.1},
                 {"precondition", true}, {"init", "gaussian"},
                 {"init_profile", ""}};
  j["options"] = default_options(task);
  return j;
}

void require_kind(const json &v, const json &ref, const std::string &where) {
  const bool ref_num = ref.is_number();
  const bool v_num = v.is_number();
  if (ref_num && v_num) return;
  if (ref.type() == v.type()) return;
  throw ParamError("config key '" + where + "' has the wrong type (expected " +
                   std::string(ref.type_name()) + ", got " +
                   std::string(v.type_name()) + ")");
}

// Overlays user values onto the task defaults, rejecting unknown keys so
// typos fail loudly instead of silently running defaults.
void merge_section(json &base, const json &user, const std::string &where) {
  if (!user.is_object())
    throw ParamError("config section '" + where + "' must be an object");
  for (const auto &item : user.items()) {
    if (!base.contains(item.key()))
      throw ParamError("unknown config key '" + where + "." + item.key() +
                       "'");
    require_kind(item.value(), base[item.key()], where + "." + item.key());
    base[item.key()] = item.value();
  }
}

json canonical_config(const json &user) {
  if (!user.is_object()) throw ParamError("scenario must be a JSON object");
  if (!user.contains("task") || !user["task"].is_string())
    throw ParamError("scenario needs a string 'task' field");
  const std::string task = user["task"].get<std::string>();
  if (std::find(task_names().begin(), task_names().end(), task) ==
      task_names().end())
    throw ParamError("unknown task '" + task +
                     "' (gn | thresholds | fiber | ground | mountain | "
                     "evolve | stability | instability | sweep)");

  json cfg = default_config(task);
  for (const auto &item : user.items()) {
    const std::string &k = item.key();
    if (k == "task") continue;
    if (k == "schema_version") {
      if (!item.value().is_number_integer() ||
          item.value().get<int>() != kSchemaVersion)
        throw ParamError("unsupported schema_version (this build reads " +
                         std::to_string(kSchemaVersion) + ")");
    } else if (k == "output_dir") {
      if (!item.value().is_string() ||
          item.value().get<std::string>().empty())
        throw ParamError("output_dir must be a nonempty string");
      cfg["output_dir"] = item.value();
    } else if (k == "seed") {
      if (!item.value().is_number_unsigned())
        throw ParamError("seed must be a nonnegative integer");
      cfg["seed"] = item.value();
    } else if (k == "prm" || k == "grid" || k == "solver" || k == "options") {
      merge_section(cfg[k], item.value(), k);
    } else {
      throw ParamError("unknown config key '" + k + "'");
    }
  }

  // Early structural validation; regime gating stays with the solvers.
  ProblemParams prm;
  prm.a = cfg["prm"]["a"].get<double>();
  prm.mu = cfg["prm"]["mu"].get<double>();
  prm.p = cfg["prm"]["p"].get<double>();
  prm.q = cfg["prm"]["q"].get<double>();
  prm.validate();
  if (!cfg["grid"]["n"].is_number_integer() ||
      cfg["grid"]["n"].get<std::int64_t>() < 16)
    throw ParamError("grid.n must be an integer >= 16");
  if (!(cfg["grid"]["r_max"].get<double>() > 0.0))
    throw ParamError("grid.r_max must be positive");
  spacing_from_string(cfg["grid"]["spacing"].get<std::string>());
  return cfg;
}

ProblemParams prm_from(const json &cfg) {
  ProblemParams prm;
  prm.a = cfg["prm"]["a"].get<double>();
  prm.mu = cfg["prm"]["mu"].get<double>();
  prm.p = cfg["prm"]["p"].get<double>();
  prm.q = cfg["prm"]["q"].get<double>();
  return prm;
}

GridPtr grid_from(const json &cfg) {
  return make_grid(cfg["grid"]["r_max"].get<double>(),
                   cfg["grid"]["n"].get<std::size_t>(),
                   spacing_from_string(cfg["grid"]["spacing"].get<std::string>()));
}

SolveOptions solver_from(const json &cfg, std::uint64_t seed) {
  const json &s = cfg["solver"];
  SolveOptions o;
  o.tol_grad = s["tol_grad"].get<double>();
  o.tol_P = s["tol_P"].get<double>();
  o.max_iter = s["max_iter"].get<std::int64_t>();
  o.tau_init = s["tau_init"].get<double>();
  o.precondition = s["precondition"].get<bool>();
  o.init = s["init"].get<std::string>();
  o.seed = seed;
  if (o.init == "profile") {
    const std::string path = s["init_profile"].get<std::string>();
    if (path.empty())
      throw ParamError("solver.init is 'profile' but init_profile is empty");
    o.init_profile = read_profile_csv(path);
  }
  return o;
}

EvolveOptions evolve_from(const json &opts, std::uint64_t seed) {
  EvolveOptions e;
  e.dt = opts["dt"].get<double>();
  e.scheme = scheme_from_string(opts["scheme"].get<std::string>());
  e.sample_every = opts["sample_every"].get<std::int64_t>();
  e.blowup_guard = opts["blowup_guard"].get<double>();
  if (opts.contains("free_flow")) e.free_flow = opts["free_flow"].get<bool>();
  e.seed = seed;
  return e;
}

json sample_json(const InvariantSample &s) {
  return json{{"t", s.t},   {"mass2", s.mass2}, {"J", s.J},
              {"H", s.H},   {"Hp", s.Hp},       {"P", s.P},
              {"grad_norm", s.grad_norm}};
}

json fiber_json(const FiberProfile &fp) {
  auto put = [](json &j, const char *k, double x) {
    if (std::isfinite(x))
      j[k] = x;
    else
      j[k] = nullptr;
  };
  json j;
  j["regime"] = to_string(fp.regime);
  put(j, "s_u", fp.s_u);
  put(j, "t_u", fp.t_u);
  put(j, "c_u", fp.c_u);
  put(j, "d_u", fp.d_u);
  put(j, "psi_s", fp.psi_s);
  put(j, "psi_t", fp.psi_t);
  put(j, "dd_s", fp.dd_s);
  put(j, "dd_t", fp.dd_t);
  return j;
}

json components_json(const EnergyBreakdown &e) {
  return json{{"T", e.T},   {"D", e.D},         {"Pp", e.Pp},
              {"Qq", e.Qq}, {"mass2", e.mass2}, {"J", e.J}};
}

json thresholds_json(const ThresholdReport &th) {
  auto put = [](json &j, const char *k, double x) {
    if (std::isfinite(x))
      j[k] = x;
    else
      j[k] = nullptr;
  };
  json j;
  j["C_p_pow"] = th.C_p_pow;
  j["C_q_pow"] = th.C_q_pow;
  j["C_12_5_pow"] = th.C_12_5_pow;
  put(j, "K", th.K);
  put(j, "exponent_B", th.exponent_B);
  put(j, "a0", th.a0);
  put(j, "abar0", th.abar0);
  put(j, "rho_a", th.rho_a);
  put(j, "rho0", th.rho0);
  put(j, "R0", th.R0);
  put(j, "R1", th.R1);
  put(j, "a_star", th.a_star);
  put(j, "k3_bound", th.k3_bound);
  j["two_branch_regime"] = th.two_branch_regime;
  j["cond_k3"] = th.cond_k3;
  j["cond_k201"] = th.cond_k201;
  return j;
}

json solve_json(const SolveReport &rep) {
  json j;
  j["kind"] = to_string(rep.kind);
  j["level"] = rep.level;
  j["lambda"] = rep.lambda;
  j["iterations"] = rep.iterations;
  j["residuals"] = {{"euler_lagrange_L2", rep.residuals.euler_lagrange_L2},
                    {"pohozaev_P", rep.residuals.pohozaev_P},
                    {"nehari", rep.residuals.nehari},
                    {"pohozaev_identity", rep.residuals.pohozaev_identity}};
  j["components"] = components_json(rep.components);
  j["fiber"] = fiber_json(rep.fiber);
  return j;
}

json verdict_json(const StabilityVerdict &v) {
  json j;
  j["kind"] = to_string(v.kind);
  j["evidence"] = v.evidence;
  j["epsilon"] = v.epsilon;
  j["delta"] = v.delta;
  j["sup_distance"] = v.sup_distance;
  j["eta"] = v.eta;
  j["envelope_root"] = v.envelope_root;
  j["grad_growth_time"] = v.grad_growth_time;
  j["left_constraint_ball"] = v.left_constraint_ball;
  json runs = json::array();
  for (const EvolutionState &run : v.runs)
    runs.push_back(json{{"final_t", run.t},
                        {"n_samples", run.log.size()},
                        {"truncated_by_blowup_guard",
                         run.truncated_by_blowup_guard}});
  j["runs"] = runs;
  return j;
}

std::string read_file_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParamError("cannot read '" + path + "'");
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

// Collects output files under one directory and records their hashes for
// the manifest. Text goes through a temp-file rename; field/trajectory CSVs
// reuse the library writers and are hashed by reading back.
struct OutputSink {
  fs::path dir;
  json hashes = json::object();

  explicit OutputSink(const std::string &d) : dir(d) {
    fs::create_directories(dir);
  }

  void text(const std::string &name, const std::string &content) {
    const fs::path p = dir / name;
    const fs::path tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw ParamError("cannot write '" + tmp.string() + "'");
      out << content;
    }
    fs::rename(tmp, p);
    hashes[name] = fnv1a_hex(content);
  }

  void field(const std::string &name, const RadialField &u) {
    const fs::path p = dir / name;
    write_profile_csv(p.string(), u);
    hashes[name] = fnv1a_hex(read_file_text(p.string()));
  }

  void trajectory(const std::string &name,
                  const std::vector<InvariantSample> &log) {
    const fs::path p = dir / name;
    write_trajectory_csv(p.string(), log);
    hashes[name] = fnv1a_hex(read_file_text(p.string()));
  }
};

// Ground-state routing shared by the ground, evolve, and stability tasks:
// the L²-critical power takes the global minimizer, everything else the
// local minimizer of the two-branch regime.
SolveReport solve_ground(const ProblemParams &prm, GridPtr grid,
                         const SolveOptions &opts) {
  if (std::abs(prm.p - kCriticalExponent) <= 1e-12)
    return critical_global_min(prm, grid, opts);
  return ground_state_local_min(prm, grid, opts);
}

struct TaskResult {
  json payload;       // task-specific report block
  json timings = json::object();
};

TaskResult run_gn(const json &cfg, OutputSink &sink) {
  const double t = cfg["options"]["t"].get<double>();
  const double tol = cfg["options"]["tol"].get<double>();
  const double t0 = std::chrono::duration<double>(
                        std::chrono::steady_clock::now().time_since_epoch())
                        .count();
  GNSoliton sol = solve_soliton(t, tol);
  gn_cache_store(sol, tol);
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now().time_since_epoch())
                          .count() -
                      t0;
  sink.field("profile.csv", sol.profile);
  TaskResult r;
  r.payload = {{"t", t},
               {"tol", tol},
               {"C_t_pow", sol.C_t_pow},
               {"C_t", std::pow(sol.C_t_pow, 1.0 / t)},
               {"soliton_mass2", sol.mass2},
               {"Q0", sol.Q0},
               {"residual", sol.residual},
               {"profile_n", sol.profile.size()},
               {"profile_r_max", sol.profile.grid->r_max}};
  r.timings["solve_seconds"] = wall;
  return r;
}

TaskResult run_thresholds(const json &cfg, OutputSink &) {
  const ProblemParams prm = prm_from(cfg);
  const ThresholdReport th = thresholds(prm);
  TaskResult r;
  r.payload = {{"thresholds", thresholds_json(th)},
               {"regime", to_string(classify_regime(prm, th))}};
  return r;
}

TaskResult run_fiber(const json &cfg, OutputSink &sink) {
  const ProblemParams prm = prm_from(cfg);
  GridPtr grid = grid_from(cfg);
  const json &o = cfg["options"];
  SolveOptions sopts = solver_from(cfg, cfg["seed"].get<std::uint64_t>());
  RadialField u(grid);
  if (sopts.init == "gaussian")
    u = sample_real(grid, [](double r) { return std::exp(-0.5 * r * r); });
  else if (sopts.init == "exponential")
    u = sample_real(grid, [](double r) { return std::exp(-r); });
  else if (sopts.init == "profile")
    u = sopts.init_profile;
  else
    throw ParamError("fiber task needs init gaussian | exponential | profile");
  for (auto &z : u.v) z = std::abs(z);
  normalize_to_mass(u, prm.a);

  const FiberComponents c = fiber_components(u, prm);
  const FiberProfile fp =
      fiber_profile(c, prm, o["s_min"].get<double>(), o["s_max"].get<double>(),
                    o["lattice"].get<double>());

  const std::int64_t m = std::max<std::int64_t>(2, o["plot_samples"].get<std::int64_t>());
  const double lo = o["plot_min"].get<double>(), hi = o["plot_max"].get<double>();
  std::ostringstream csv;
  csv << "s,psi,dpsi\n";
  char buf[128];
  for (std::int64_t k = 0; k < m; ++k) {
    const double s = lo + (hi - lo) * static_cast<double>(k) /
                              static_cast<double>(m - 1);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s,
                  fiber_value(c, prm, s), fiber_derivative(c, prm, s));
    csv << buf;
  }
  sink.text("fiber.csv", csv.str());
  sink.field("profile.csv", u);

  TaskResult r;
  r.payload = {{"fiber", fiber_json(fp)},
               {"components", json{{"T", c.T},
                                   {"D", c.D},
                                   {"Pp", c.Pp},
                                   {"Qq", c.Qq},
                                   {"mass2", c.mass2}}}};
  return r;
}

TaskResult run_solve(const json &cfg, OutputSink &sink, bool mountain) {
  const ProblemParams prm = prm_from(cfg);
  GridPtr grid = grid_from(cfg);
  SolveOptions opts = solver_from(cfg, cfg["seed"].get<std::uint64_t>());
  const ThresholdReport th = thresholds(prm);
  SolveReport rep =
      mountain ? mountain_pass(prm, grid, opts) : solve_ground(prm, grid, opts);
  sink.field("profile.csv", rep.profile);
  TaskResult r;
  r.payload = {{"solve", solve_json(rep)},
               {"thresholds", thresholds_json(th)},
               {"regime", to_string(classify_regime(prm, th))}};
  r.timings["solve_seconds"] = rep.wall_time;
  return r;
}

TaskResult run_evolve(const json &cfg, OutputSink &sink) {
  const ProblemParams prm = prm_from(cfg);
  GridPtr grid = grid_from(cfg);
  const json &o = cfg["options"];
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();

  RadialField phi0(grid);
  const std::string init = o["init"].get<std::string>();
  json init_block;
  if (init == "ground" || init == "mountain") {
    SolveOptions sopts = solver_from(cfg, seed);
    SolveReport rep = init == "ground" ? solve_ground(prm, grid, sopts)
                                       : mountain_pass(prm, grid, sopts);
    phi0 = rep.profile;
    init_block = solve_json(rep);
  } else {
    phi0 = read_profile_csv(init);
    init_block = json{{"profile", init}};
  }

  const double rho = o["rho"].get<double>();
  if (rho != 0.0) {
    const double a = std::sqrt(mass2(phi0));
    phi0 = dilate(phi0, rho);
    normalize_to_mass(phi0, a);
  }

  EvolveOptions eopts = evolve_from(o, seed);
  const double T = o["T"].get<double>();
  EvolutionState st = evolve(phi0, prm, T, eopts);

  sink.field("profile.csv", phi0);
  sink.field("profile_final.csv", st.phi);
  sink.trajectory("trajectory.csv", st.log);

  const InvariantSample &s0 = st.log.front();
  const InvariantSample &s1 = st.log.back();
  double mass_drift = 0.0, energy_drift = 0.0;
  if (s1.t > 0.0) {
    mass_drift = std::abs(s1.mass2 / s0.mass2 - 1.0) / s1.t;
    energy_drift = std::abs(s1.J - s0.J) / s1.t;
  }
  TaskResult r;
  r.payload = {{"init", init_block},
               {"T", T},
               {"dt", eopts.dt},
               {"scheme", to_string(eopts.scheme)},
               {"free_flow", eopts.free_flow},
               {"rho", rho},
               {"n_samples", st.log.size()},
               {"truncated_by_blowup_guard", st.truncated_by_blowup_guard},
               {"initial", sample_json(s0)},
               {"final", sample_json(s1)},
               {"mass_rel_drift_per_t", mass_drift},
               {"energy_drift_per_t", energy_drift}};
  return r;
}

TaskResult run_stability(const json &cfg, OutputSink &sink) {
  const ProblemParams prm = prm_from(cfg);
  GridPtr grid = grid_from(cfg);
  const json &o = cfg["options"];
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  SolveOptions sopts = solver_from(cfg, seed);
  SolveReport rep = solve_ground(prm, grid, sopts);
  EvolveOptions eopts = evolve_from(o, seed);
  StabilityVerdict v = stability_experiment(
      rep, prm, o["n_perturbations"].get<int>(), o["delta"].get<double>(),
      o["T"].get<double>(), eopts);
  sink.field("profile.csv", rep.profile);
  for (std::size_t j = 0; j < v.runs.size(); ++j)
    sink.trajectory("trajectory_run" + std::to_string(j) + ".csv",
                    v.runs[j].log);
  TaskResult r;
  r.payload = {{"solve", solve_json(rep)}, {"stability", verdict_json(v)}};
  r.timings["solve_seconds"] = rep.wall_time;
  return r;
}

TaskResult run_instability(const json &cfg, OutputSink &sink) {
  const ProblemParams prm = prm_from(cfg);
  GridPtr grid = grid_from(cfg);
  const json &o = cfg["options"];
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  SolveOptions sopts = solver_from(cfg, seed);
  SolveReport rep = mountain_pass(prm, grid, sopts);
  EvolveOptions eopts = evolve_from(o, seed);
  StabilityVerdict v = instability_experiment(rep, prm, o["rho"].get<double>(),
                                              o["T"].get<double>(), eopts);
  sink.field("profile.csv", rep.profile);
  if (!v.runs.empty()) sink.trajectory("trajectory.csv", v.runs[0].log);
  TaskResult r;
  r.payload = {{"solve", solve_json(rep)}, {"instability", verdict_json(v)}};
  r.timings["solve_seconds"] = rep.wall_time;
  return r;
}

struct SweepCell {
  double a = 0.0, mu = 0.0;
  std::string regime;
  double m_a = std::numeric_limits<double>::quiet_NaN();
  double c_a = std::numeric_limits<double>::quiet_NaN();
  std::string ground_status = "skipped";
  std::string mountain_status = "skipped";
  std::string witness_status = "skipped";
  double wall = 0.0;
};

std::string error_status(const char *prefix, const std::exception &e) {
  std::string s = std::string(prefix) + ": " + e.what();
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void run_sweep_cell(SweepCell &cell, const ProblemParams &base, GridPtr grid,
                    const SolveOptions &opts) {
  const auto t0 = std::chrono::steady_clock::now();
  ProblemParams prm = base;
  prm.a = cell.a;
  prm.mu = cell.mu;
  try {
    const ThresholdReport th = thresholds(prm);
    const RegimeTag tag = classify_regime(prm, th);
    cell.regime = to_string(tag);

    const bool p_critical = std::abs(prm.p - kCriticalExponent) <= 1e-12;
    const bool try_ground = tag == RegimeTag::th1_two_branch ||
                            tag == RegimeTag::th7_critical_p_case1;
    const bool try_mountain =
        (tag == RegimeTag::th1_two_branch && th.cond_k3 &&
         prm.q <= 12.0 / 5.0 + 1e-12) ||
        tag == RegimeTag::th2_mountain_only ||
        tag == RegimeTag::th5_defocusing || tag == RegimeTag::th15_critical_q;
    const bool try_witness =
        p_critical && std::isfinite(th.a_star) && prm.a > th.a_star;

    if (try_ground) {
      try {
        SolveReport rep = solve_ground(prm, grid, opts);
        cell.m_a = rep.level;
        cell.ground_status = "ok";
      } catch (const ParamError &e) {
        cell.ground_status = error_status("param-error", e);
      } catch (const SolverError &e) {
        cell.ground_status = error_status("solver-error", e);
      } catch (const NumericError &e) {
        cell.ground_status = error_status("numeric-error", e);
      }
    }
    if (try_mountain) {
      try {
        SolveReport rep = mountain_pass(prm, grid, opts);
        cell.c_a = rep.level;
        cell.mountain_status = "ok";
      } catch (const ParamError &e) {
        cell.mountain_status = error_status("param-error", e);
      } catch (const SolverError &e) {
        cell.mountain_status = error_status("solver-error", e);
      } catch (const NumericError &e) {
        cell.mountain_status = error_status("numeric-error", e);
      }
    }
    if (try_witness) {
      try {
        const DichotomyWitness wit = critical_dichotomy_witness(prm, grid);
        bool tail_decreasing = true;
        const std::size_t nS = wit.J_samples.size();
        for (std::size_t k = nS >= 5 ? nS - 5 : 1; k < nS; ++k)
          if (!(wit.J_samples[k] < wit.J_samples[k - 1]))
            tail_decreasing = false;
        std::ostringstream oss;
        oss << "E0=" << wit.E0 << "; fiber-tail-decreasing="
            << (tail_decreasing ? "yes" : "no");
        cell.witness_status = oss.str();
      } catch (const std::exception &e) {
        cell.witness_status = error_status("witness-error", e);
      }
    }
  } catch (const std::exception &e) {
    cell.regime = error_status("cell-error", e);
  }
  cell.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count();
}

TaskResult run_sweep(const json &cfg, OutputSink &sink) {
  const ProblemParams base = prm_from(cfg);
  GridPtr grid = grid_from(cfg);
  const json &o = cfg["options"];
  SolveOptions opts = solver_from(cfg, cfg["seed"].get<std::uint64_t>());

  std::vector<SweepCell> cells;
  for (const auto &av : o["a_values"]) {
    for (const auto &mv : o["mu_values"]) {
      SweepCell c;
      c.a = av.get<double>();
      c.mu = mv.get<double>();
      if (!(c.a > 0.0)) throw ParamError("sweep a_values must be positive");
      cells.push_back(c);
    }
  }
  if (cells.empty()) throw ParamError("sweep has no cells");

  // Warm the constant cache once so workers never race on a cold solve.
  thresholds(base);

  const int workers = std::max(
      1, std::min<int>(o["workers"].get<int>(),
                       static_cast<int>(cells.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) break;
      run_sweep_cell(cells[i], base, grid, opts);
    }
  };
  std::vector<std::thread> pool;
  for (int wi = 1; wi < workers; ++wi) pool.emplace_back(work);
  work();
  for (std::thread &t : pool) t.join();

  std::ostringstream csv;
  csv << "a,mu,regime,m_a,c_a,ground_status,mountain_status,witness_status\n";
  char buf[64];
  auto num = [&buf](double x) -> std::string {
    if (!std::isfinite(x)) return "";
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
  };
  json rows = json::array();
  json walls = json::array();
  for (const SweepCell &c : cells) {
    csv << num(c.a) << "," << num(c.mu) << "," << c.regime << ","
        << num(c.m_a) << "," << num(c.c_a) << "," << c.ground_status << ","
        << c.mountain_status << "," << c.witness_status << "\n";
    json row;
    row["a"] = c.a;
    row["mu"] = c.mu;
    row["regime"] = c.regime;
    row["m_a"] = std::isfinite(c.m_a) ? json(c.m_a) : json(nullptr);
    row["c_a"] = std::isfinite(c.c_a) ? json(c.c_a) : json(nullptr);
    row["ground_status"] = c.ground_status;
    row["mountain_status"] = c.mountain_status;
    row["witness_status"] = c.witness_status;
    rows.push_back(row);
    walls.push_back(c.wall);
  }
  sink.text("sweep.csv", csv.str());

  TaskResult r;
  r.payload = {{"n_cells", cells.size()}, {"rows", rows}};
  r.timings["cell_seconds"] = walls;
  return r;
}

} // namespace

Scenario Scenario::from_json_text(const std::string &text) {
  nlohmann::json user = nlohmann::json::parse(text, nullptr, false);
  if (user.is_discarded())
    throw ParamError("scenario text is not valid JSON");
  Scenario sc;
  sc.json = canonical_config(user).dump();
  return sc;
}

Scenario Scenario::from_file(const std::string &path) {
  return from_json_text(read_file_text(path));
}

Scenario Scenario::defaults(const std::string &task) {
  Scenario sc;
  sc.json = canonical_config(nlohmann::json{{"task", task}}).dump();
  return sc;
}

void Scenario::set(const std::string &dotted_key, const std::string &value) {
  nlohmann::json cfg = nlohmann::json::parse(json);
  std::string pointer = "/";
  for (char c : dotted_key) pointer += (c == '.') ? '/' : c;
  nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  try {
    cfg[nlohmann::json::json_pointer(pointer)] = parsed;
  } catch (const nlohmann::json::exception &e) {
    throw ParamError("cannot apply override '" + dotted_key +
                     "': " + e.what());
  }
  this->json = canonical_config(cfg).dump();
}

std::string Scenario::task() const {
  return nlohmann::json::parse(json).at("task").get<std::string>();
}

std::string Scenario::output_dir() const {
  return nlohmann::json::parse(json).at("output_dir").get<std::string>();
}

std::uint64_t Scenario::seed() const {
  return nlohmann::json::parse(json).at("seed").get<std::uint64_t>();
}

std::string Scenario::run() const {
  const nlohmann::json cfg = nlohmann::json::parse(json);
  const std::string task = cfg["task"].get<std::string>();
  OutputSink sink(cfg["output_dir"].get<std::string>());

  const auto t0 = std::chrono::steady_clock::now();
  TaskResult result;
  if (task == "gn")
    result = run_gn(cfg, sink);
  else if (task == "thresholds")
    result = run_thresholds(cfg, sink);
  else if (task == "fiber")
    result = run_fiber(cfg, sink);
  else if (task == "ground")
    result = run_solve(cfg, sink, false);
  else if (task == "mountain")
    result = run_solve(cfg, sink, true);
  else if (task == "evolve")
    result = run_evolve(cfg, sink);
  else if (task == "stability")
    result = run_stability(cfg, sink);
  else if (task == "instability")
    result = run_instability(cfg, sink);
  else
    result = run_sweep(cfg, sink);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  nlohmann::json report;
  report["schema_version"] = kSchemaVersion;
  report["version"] = kVersion;
  report["task"] = task;
  report["config_hash"] = fnv1a_hex(json);
  report["seed"] = cfg["seed"];
  report["prm"] = cfg["prm"];
  report["grid"] = cfg["grid"];
  report["status"] = "ok";
  report["report"] = result.payload;
  const std::string report_text = report.dump(2) + "\n";
  sink.text("report.json", report_text);

  nlohmann::json manifest;
  manifest["config_hash"] = fnv1a_hex(json);
  manifest["config"] = cfg;
  manifest["version"] = kVersion;
  manifest["schema_version"] = kSchemaVersion;
  manifest["task"] = task;
  manifest["outputs"] = sink.hashes;
  result.timings["wall_seconds"] = wall;
  manifest["timings"] = result.timings;
  {
    const fs::path p = sink.dir / "manifest.json";
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ParamError("cannot write '" + p.string() + "'");
    out << manifest.dump(2) << "\n";
  }
  return report_text;
}

} // namespace nsol
