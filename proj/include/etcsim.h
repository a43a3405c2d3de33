/* C interface to the etcsim simulation core.
 *
 * All functions return an etcsim_status; 0 means success. On failure a
 * human-readable message is available from etcsim_last_error() (thread-local,
 * valid until the next failing call on the same thread). Objects returned
 * through out-parameters are owned by the caller and released with the
 * matching *_free function. Strings returned through char** out-parameters
 * are released with etcsim_string_free.
 */
#ifndef ETCSIM_H
#define ETCSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int etcsim_status;

enum {
  ETCSIM_OK = 0,
  ETCSIM_ERR_INVALID_ARGUMENT = 1,
  ETCSIM_ERR_NON_SYMMETRIC = 2,
  ETCSIM_ERR_NEGATIVE_WEIGHT = 3,
  ETCSIM_ERR_NONZERO_DIAGONAL = 4,
  ETCSIM_ERR_DIMENSION_MISMATCH = 5,
  ETCSIM_ERR_NON_FINITE_DERIVATIVE = 6,
  ETCSIM_ERR_FAULT_FACTOR_OUT_OF_RANGE = 7,
  ETCSIM_ERR_NON_POSITIVE_GAIN = 8,
  ETCSIM_ERR_STEP_TOO_LARGE = 9,
  ETCSIM_ERR_CONTROLLER_DIVERGED = 10,
  ETCSIM_ERR_TIME_REGRESSION = 11,
  ETCSIM_ERR_ZERO_RATE_BOUND = 12,
  ETCSIM_ERR_DIVERGED = 13,
  ETCSIM_ERR_NON_FINITE = 14,
  ETCSIM_ERR_SCHEMA = 15,
  ETCSIM_ERR_VALIDATION = 16,
  ETCSIM_ERR_UNKNOWN_PLANT = 17,
  ETCSIM_ERR_IO = 18,
  ETCSIM_ERR_INTERNAL = 19
};

typedef struct etcsim_config etcsim_config;
typedef struct etcsim_result etcsim_result;

const char* etcsim_version(void);
const char* etcsim_status_name(etcsim_status status);
const char* etcsim_last_error(void);
void etcsim_string_free(char* text);

/* --- configuration ------------------------------------------------------ */

etcsim_status etcsim_config_from_json(const char* json_text, etcsim_config** out);
etcsim_status etcsim_config_from_file(const char* path, etcsim_config** out);
etcsim_status etcsim_config_builtin(const char* name, etcsim_config** out);
void etcsim_config_free(etcsim_config* config);

/* mode is one of "nominal", "event" / "event_triggered", "twin". */
etcsim_status etcsim_config_set_mode(etcsim_config* config, const char* mode);
etcsim_status etcsim_config_set_dt(etcsim_config* config, double dt);
etcsim_status etcsim_config_set_t_end(etcsim_config* config, double t_end);
etcsim_status etcsim_config_set_thresholds(etcsim_config* config, double dx_self,
                                           double dx_neighbor, double du);

/* Canonical echo with all defaults applied. */
etcsim_status etcsim_config_resolved_json(const etcsim_config* config, char** out);
/* Content hash of the resolved configuration; buffer must hold >= 17 bytes. */
etcsim_status etcsim_config_hash(const etcsim_config* config, char* buffer,
                                 size_t buffer_size);

/* --- simulation --------------------------------------------------------- */

etcsim_status etcsim_run(const etcsim_config* config, etcsim_result** out);

size_t etcsim_result_agent_count(const etcsim_result* result);
size_t etcsim_result_row_count(const etcsim_result* result);
/* Fetch a named scalar metric, e.g. "tail_max_e", "max_abs_u",
 * "events_self", "lemma3_violations", "twin_gap_x". */
etcsim_status etcsim_result_metric(const etcsim_result* result, const char* name,
                                   double* out);
etcsim_status etcsim_result_summary(const etcsim_result* result, char** out);
/* Writes trajectories.csv, events.csv, summary.txt, resolved_config.json
 * (plus trajectories_nominal.csv for twin runs) into out_dir. */
etcsim_status etcsim_result_write(const etcsim_result* result, const char* out_dir);
void etcsim_result_free(etcsim_result* result);

/* --- experiments -------------------------------------------------------- */

/* threshold_sets holds n_sets consecutive (dx_self, dx_neighbor, du)
 * triples. Returns the comparison table as CSV text; when out_dir is
 * non-NULL also writes comparison.csv there. */
etcsim_status etcsim_sweep(const etcsim_config* config,
                           const double* threshold_sets, size_t n_sets,
                           const char* out_dir, char** table_csv);

/* Randomized property suites (graph spectrum, basis-shift bound, signal
 * chain bounds, projection). all_pass receives 1 when every property held. */
etcsim_status etcsim_lemma_report(unsigned long long seed, char** report_text,
                                  int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* ETCSIM_H */
