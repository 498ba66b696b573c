// norm-soliton: command-line driver for the normalized standing-wave tasks.
// Every subcommand builds a scenario (defaults, or --config JSON), applies
// dotted-key overrides, runs it, writes reports under the output directory,
// and prints the result report to stdout. Exit codes: 0 success, 2 parameter
// or regime error, 3 solver failure, 4 numeric breakdown.
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "norm_soliton.h"

namespace {

const char *status_name(ns_status st) {
  switch (st) {
  case NS_OK: return "ok";
  case NS_ERR_PARAM: return "parameter";
  case NS_ERR_SOLVER: return "solver";
  default: return "numeric";
  }
}

std::string fmt_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"normalized standing waves of the Schrodinger-Poisson system "
               "with combined power nonlinearities: variational solvers, "
               "mass thresholds, and direct time evolution"};
  app.require_subcommand(1);

  std::string config, out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> ev_init, ev_scheme;
  std::optional<double> ev_rho, ev_T, ev_dt;

  struct TaskDef {
    const char *name;
    const char *help;
  };
  const TaskDef tasks[] = {
      {"gn", "solve the sharp interpolation-constant soliton profile"},
      {"thresholds", "compute the mass thresholds and regime classification"},
      {"fiber", "scan the dilation fiber of an initial field"},
      {"ground", "solve the ground state (local or global minimizer)"},
      {"mountain", "solve the mountain-pass state"},
      {"evolve", "integrate the time-dependent flow"},
      {"stability", "perturb a minimizer and track the orbit distance"},
      {"instability", "compress a mountain-pass state and certify blow-up"},
      {"sweep", "map regimes and levels over an (a, mu) grid"},
  };
  for (const TaskDef &t : tasks) {
    CLI::App *sub = app.add_subcommand(t.name, t.help);
    sub->add_option("--config", config, "scenario JSON file");
    sub->add_option("--override", overrides,
                    "dotted-key override key=value (repeatable)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "random seed");
    if (std::string(t.name) == "evolve") {
      sub->add_option("--init", ev_init,
                      "initial datum: ground | mountain | profile CSV path");
      sub->add_option("--rho", ev_rho, "fiber compression of the datum");
      sub->add_option("--T", ev_T, "evolution horizon");
      sub->add_option("--dt", ev_dt, "time step");
      sub->add_option("--scheme", ev_scheme, "integrator: strang | cn");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string task = app.get_subcommands().front()->get_name();

  ns_scenario *sc = nullptr;
  ns_status st = config.empty() ? ns_scenario_new(task.c_str(), &sc)
                                : ns_scenario_from_file(config.c_str(), &sc);
  auto fail = [&](const std::string &stage) {
    std::fprintf(stderr, "norm-soliton %s: %s error during %s: %s\n",
                 task.c_str(), status_name(st), stage.c_str(),
                 sc != nullptr ? ns_scenario_last_error(sc)
                               : "handle allocation failed");
    ns_scenario_free(sc);
    return static_cast<int>(st);
  };
  if (st != NS_OK) return fail("configuration");

  if (!config.empty()) {
    st = ns_scenario_set(sc, "task", ("\"" + task + "\"").c_str());
    if (st != NS_OK) return fail("task selection");
  }
  if (seed.has_value()) {
    st = ns_scenario_set(sc, "seed", std::to_string(*seed).c_str());
    if (st != NS_OK) return fail("--seed");
  }
  if (ev_init.has_value()) {
    st = ns_scenario_set(sc, "options.init",
                         ("\"" + *ev_init + "\"").c_str());
    if (st != NS_OK) return fail("--init");
  }
  if (ev_scheme.has_value()) {
    st = ns_scenario_set(sc, "options.scheme",
                         ("\"" + *ev_scheme + "\"").c_str());
    if (st != NS_OK) return fail("--scheme");
  }
  if (ev_rho.has_value()) {
    st = ns_scenario_set(sc, "options.rho", fmt_num(*ev_rho).c_str());
    if (st != NS_OK) return fail("--rho");
  }
  if (ev_T.has_value()) {
    st = ns_scenario_set(sc, "options.T", fmt_num(*ev_T).c_str());
    if (st != NS_OK) return fail("--T");
  }
  if (ev_dt.has_value()) {
    st = ns_scenario_set(sc, "options.dt", fmt_num(*ev_dt).c_str());
    if (st != NS_OK) return fail("--dt");
  }
  for (const std::string &kv : overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr,
                   "norm-soliton %s: --override expects key=value, got '%s'\n",
                   task.c_str(), kv.c_str());
      ns_scenario_free(sc);
      return 2;
    }
    st = ns_scenario_set(sc, kv.substr(0, eq).c_str(),
                         kv.substr(eq + 1).c_str());
    if (st != NS_OK) return fail("--override " + kv.substr(0, eq));
  }

  st = ns_scenario_run(sc, out.empty() ? nullptr : out.c_str());
  if (st != NS_OK) return fail("run");

  const char *result = ns_scenario_result(sc);
  if (result != nullptr) std::fputs(result, stdout);
  ns_scenario_free(sc);
  return 0;
}
