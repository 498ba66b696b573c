#include "norm_soliton.h"

#include <new>
#include <string>
#include <utility>

#include "json.hpp"
#include "nsol/scenario.hpp"
#include "nsol/version.hpp"

struct ns_scenario {
  nsol::Scenario sc;
  bool ready = false; // construction succeeded
  std::string last_error;
  std::string last_result;
};

namespace {

// Runs f under the exception-to-status mapping shared with the CLI exit
// codes. Unexpected exceptions count as numeric breakdown.
template <class F> ns_status guarded(ns_scenario *h, F &&f) {
  try {
    f();
    h->last_error.clear();
    return NS_OK;
  } catch (const nsol::ParamError &e) {
    h->last_error = e.what();
    return NS_ERR_PARAM;
  } catch (const nsol::SolverError &e) {
    h->last_error = e.what();
    return NS_ERR_SOLVER;
  } catch (const nsol::NumericError &e) {
    h->last_error = e.what();
    return NS_ERR_NUMERIC;
  } catch (const std::exception &e) {
    h->last_error = e.what();
    return NS_ERR_NUMERIC;
  }
}

template <class F> ns_status create(ns_scenario **out, F &&make) {
  if (out == nullptr) return NS_ERR_PARAM;
  ns_scenario *h = new (std::nothrow) ns_scenario;
  if (h == nullptr) {
    *out = nullptr;
    return NS_ERR_NUMERIC;
  }
  const ns_status st = guarded(h, [&]() {
    h->sc = make();
    h->ready = true;
  });
  *out = h;
  return st;
}

} // namespace

extern "C" {

const char *ns_version(void) { return nsol::kVersion; }

ns_status ns_scenario_new(const char *task, ns_scenario **out) {
  return create(out, [&]() {
    if (task == nullptr) throw nsol::ParamError("task name is NULL");
    return nsol::Scenario::defaults(task);
  });
}

ns_status ns_scenario_from_file(const char *path, ns_scenario **out) {
  return create(out, [&]() {
    if (path == nullptr) throw nsol::ParamError("config path is NULL");
    return nsol::Scenario::from_file(path);
  });
}

ns_status ns_scenario_from_json(const char *json_text, ns_scenario **out) {
  return create(out, [&]() {
    if (json_text == nullptr) throw nsol::ParamError("config text is NULL");
    return nsol::Scenario::from_json_text(json_text);
  });
}

ns_status ns_scenario_set(ns_scenario *sc, const char *key,
                          const char *value) {
  if (sc == nullptr) return NS_ERR_PARAM;
  return guarded(sc, [&]() {
    if (!sc->ready) throw nsol::ParamError("scenario failed to construct");
    if (key == nullptr || value == nullptr)
      throw nsol::ParamError("override key/value is NULL");
    sc->sc.set(key, value);
  });
}

ns_status ns_scenario_run(ns_scenario *sc, const char *output_dir) {
  if (sc == nullptr) return NS_ERR_PARAM;
  return guarded(sc, [&]() {
    if (!sc->ready) throw nsol::ParamError("scenario failed to construct");
    if (output_dir != nullptr)
      sc->sc.set("output_dir", nlohmann::json(output_dir).dump());
    sc->last_result = sc->sc.run();
  });
}

const char *ns_scenario_result(const ns_scenario *sc) {
  if (sc == nullptr || sc->last_result.empty()) return nullptr;
  return sc->last_result.c_str();
}

const char *ns_scenario_last_error(const ns_scenario *sc) {
  if (sc == nullptr) return "";
  return sc->last_error.c_str();
}

void ns_scenario_free(ns_scenario *sc) { delete sc; }

} // extern "C"
