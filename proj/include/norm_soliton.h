/*
 * norm_soliton.h
 *
 * C interface to the normalized-soliton library: prescribed-mass standing
 * waves of the Schrodinger-Poisson equation with combined power
 * nonlinearities, their variational thresholds, and direct time evolution.
 *
 * The unit of work is an opaque scenario handle. Build one from a task name
 * or a JSON document, adjust it with dotted-key overrides, run it, then read
 * the result report as JSON. All functions returning ns_status use 0 for
 * success; nonzero values match the CLI exit codes.
 */
#ifndef NORM_SOLITON_H
#define NORM_SOLITON_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ns_status {
  NS_OK = 0,
  NS_ERR_PARAM = 2,   /* invalid parameters or outside every covered regime */
  NS_ERR_SOLVER = 3,  /* iteration failed to converge or was trapped */
  NS_ERR_NUMERIC = 4  /* non-finite values or numerical breakdown */
} ns_status;

typedef struct ns_scenario ns_scenario;

/* Library version string, e.g. "1.0.0". Never NULL. */
const char *ns_version(void);

/* Creates a scenario with defaults for the given task. Tasks: gn,
 * thresholds, fiber, ground, mountain, evolve, stability, instability,
 * sweep. *out always receives a handle (free with ns_scenario_free); on a
 * nonzero status the handle is empty apart from its last_error message. */
ns_status ns_scenario_new(const char *task, ns_scenario **out);

/* Creates a scenario from a JSON document (file path or in-memory text). */
ns_status ns_scenario_from_file(const char *path, ns_scenario **out);
ns_status ns_scenario_from_json(const char *json_text, ns_scenario **out);

/* Applies a dotted-key override, e.g. ("prm.a", "0.4"), ("grid.n", "1024"),
 * ("options.T", "20"), ("output_dir", "out/run1"). Values are parsed as JSON
 * when possible and as strings otherwise. */
ns_status ns_scenario_set(ns_scenario *sc, const char *key, const char *value);

/* Runs the task. If output_dir is non-NULL it overrides the scenario's
 * output directory. Reports, profiles, and a manifest are written there. */
ns_status ns_scenario_run(ns_scenario *sc, const char *output_dir);

/* JSON text of the last successful run's report. NULL before a run.
 * Owned by the handle; valid until the next run or free. */
const char *ns_scenario_result(const ns_scenario *sc);

/* Message of the last error on this handle, or an empty string. */
const char *ns_scenario_last_error(const ns_scenario *sc);

void ns_scenario_free(ns_scenario *sc);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NORM_SOLITON_H */
