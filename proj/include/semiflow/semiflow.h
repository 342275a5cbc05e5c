#ifndef SEMIFLOW_H
#define SEMIFLOW_H

/* C interface to the semiflow scenario runner. Handles are opaque; every
 * call that can fail returns an sf_status and leaves a human-readable
 * message in sf_last_error() (thread local, overwritten per call). No
 * exception ever crosses this boundary. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sf_status {
  SF_OK = 0,
  SF_BAD_PARAMETER,
  SF_OUTSIDE_DOMAIN,
  SF_MARGIN_VIOLATION,
  SF_EMPTY_SAMPLE,
  SF_CURVE_EXITS_DOMAIN,
  SF_UNREACHABLE,
  SF_UNSUPPORTED,
  SF_TRAJECTORY_ESCAPE,
  SF_STIFFNESS_FAILURE,
  SF_DEGENERATE_PAIR,
  SF_CONTRACT_VIOLATION,
  SF_HYPOTHESIS_NOT_MET,
  SF_NO_DELTA1,
  SF_DIVERGING,
  SF_CONFIG_ERROR,
  SF_IO_ERROR,
  SF_INTERNAL
} sf_status;

typedef struct sf_scenario sf_scenario;

const char* sf_version(void);
const char* sf_status_name(sf_status status);

/* Process exit class for a status: 0 success, 2 bad configuration or
 * setup, 3 runtime failure, 4 quantitative hypotheses unmet (the run was
 * fine, the mathematics said no). Checked-and-failed scenarios return
 * SF_OK with sf_scenario_pass() == 0; callers map that to exit 1. */
int sf_exit_code(sf_status status);

/* Message from the most recent failing call on this thread; empty string
 * after a success. The pointer stays valid until the next call. */
const char* sf_last_error(void);

/* Canned scenario text for the bundled reproduction examples
 * ("piecewise_corner", "ellinf_paths"); NULL for unknown names. */
const char* sf_builtin_scenario(const char* name);

/* Parse a scenario from JSON text or a file. On success *out owns the
 * scenario and must be released with sf_scenario_free. */
sf_status sf_scenario_parse(const char* json_text, sf_scenario** out);
sf_status sf_scenario_load(const char* path, sf_scenario** out);
void sf_scenario_free(sf_scenario* sc);

/* Command-line overrides, applied before running and echoed into every
 * output file. */
sf_status sf_scenario_set_seed(sf_scenario* sc, unsigned long long seed);
sf_status sf_scenario_set_tolerance(sf_scenario* sc, double tolerance);

/* Runs the scenario, writing report files into out_dir (created when
 * missing; "." when NULL). format is "csv", "json", or "both" (NULL means
 * both). Rerunning the same scenario writes byte-identical files. */
sf_status sf_scenario_run(sf_scenario* sc, const char* out_dir,
                          const char* format);

/* Results of the last successful run: pass is 1 when every requested
 * criterion held, 0 otherwise, -1 before any run. Files and summaries are
 * indexed 0..count-1; pointers stay valid until the next run or free. */
int sf_scenario_pass(const sf_scenario* sc);
int sf_scenario_file_count(const sf_scenario* sc);
const char* sf_scenario_file(const sf_scenario* sc, int i);
int sf_scenario_summary_count(const sf_scenario* sc);
const char* sf_scenario_summary(const sf_scenario* sc, int i);

const char* sf_scenario_name(const sf_scenario* sc);
const char* sf_scenario_command(const sf_scenario* sc);

#ifdef __cplusplus
}
#endif

#endif /* SEMIFLOW_H */
