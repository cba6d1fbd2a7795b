/* C interface to the pf2es library.
 *
 * Every function returns a pf2es_status. On failure a message describing the
 * error is available from pf2es_last_error() on the calling thread until the
 * next failing call on that thread. Strings returned through char** out
 * parameters are owned by the caller and released with pf2es_string_free().
 * Handles are opaque; release each with its matching *_free function.
 */
#ifndef PF2ES_PF2ES_H
#define PF2ES_PF2ES_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PF2ES_API __declspec(dllexport)
#else
#define PF2ES_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pf2es_status {
  PF2ES_OK = 0,
  PF2ES_ERR_INVALID_ARGUMENT = 1,
  PF2ES_ERR_CONFIG = 2,
  PF2ES_ERR_UNKNOWN_PROBLEM = 3,
  PF2ES_ERR_NUMERICAL = 4,
  PF2ES_ERR_FIT = 5,
  PF2ES_ERR_UNSUPPORTED = 6,
  PF2ES_ERR_IO = 7,
  PF2ES_ERR_INTERNAL = 8
} pf2es_status;

typedef struct pf2es_manifest pf2es_manifest;
typedef struct pf2es_record pf2es_record;
typedef struct pf2es_surrogate pf2es_surrogate;

/* Called once per progress-log line; calls are serialized. */
typedef void (*pf2es_log_fn)(const char* line, void* user);

PF2ES_API const char* pf2es_version(void);
PF2ES_API const char* pf2es_last_error(void);
PF2ES_API const char* pf2es_status_name(pf2es_status status);
PF2ES_API void pf2es_string_free(char* s);

/* Benchmarks. Objectives are to be maximized; constraints are feasible
 * when >= 0. */
PF2ES_API pf2es_status pf2es_list_problems(char** json_out);
PF2ES_API pf2es_status pf2es_problem_info(const char* name, int* dim, int* num_objectives, int* num_constraints);
PF2ES_API pf2es_status pf2es_problem_bounds(const char* name, double* lower, double* upper, int dim);
PF2ES_API pf2es_status pf2es_evaluate(const char* name, const double* x, int dim, double* out, int out_len);

/* A single optimization run from a JSON config (see config_to_json in the
 * C++ sources for field names; omitted fields take defaults). */
PF2ES_API pf2es_status pf2es_default_config(const char* problem, char** json_out);
PF2ES_API pf2es_status pf2es_run(const char* config_json, pf2es_record** out);

PF2ES_API pf2es_status pf2es_record_from_json(const char* json, pf2es_record** out);
PF2ES_API pf2es_status pf2es_record_to_json(const pf2es_record* record, int strip_timings, char** json_out);
PF2ES_API pf2es_status pf2es_record_to_csv(const pf2es_record* record, int header, char** csv_out);
PF2ES_API pf2es_status pf2es_record_num_iterations(const pf2es_record* record, int* count);
PF2ES_API pf2es_status pf2es_record_log_hv_difference(const pf2es_record* record, int iteration, double* value);
PF2ES_API pf2es_status pf2es_record_num_evaluations(const pf2es_record* record, int* count);
PF2ES_API pf2es_status pf2es_record_aborted(const pf2es_record* record, int* aborted);
PF2ES_API void pf2es_record_free(pf2es_record* record);

/* Experiment manifests (YAML, schema "pf2es-manifest/1"). */
PF2ES_API pf2es_status pf2es_manifest_load(const char* path, pf2es_manifest** out);
PF2ES_API pf2es_status pf2es_manifest_parse(const char* text, pf2es_manifest** out);
PF2ES_API pf2es_status pf2es_manifest_set_output_dir(pf2es_manifest* m, const char* dir);
PF2ES_API pf2es_status pf2es_manifest_set_workers(pf2es_manifest* m, int workers);
PF2ES_API pf2es_status pf2es_manifest_set_seed_base(pf2es_manifest* m, uint64_t seed_base);
/* parameter is "c" or "n_mc"; replaces any sweep given in the manifest. */
PF2ES_API pf2es_status pf2es_manifest_set_sweep(pf2es_manifest* m, const char* parameter, const double* values,
                                                int count);
PF2ES_API pf2es_status pf2es_manifest_output_dir(const pf2es_manifest* m, char** dir_out);
/* Validates the expanded run list and returns its size. */
PF2ES_API pf2es_status pf2es_manifest_num_runs(const pf2es_manifest* m, int* count);
/* Runs everything. Config problems are reported before any file is written.
 * Individual run failures are counted in *failed and logged; the call still
 * returns PF2ES_OK. */
PF2ES_API pf2es_status pf2es_manifest_run(const pf2es_manifest* m, pf2es_log_fn log, void* user, int* failed);
PF2ES_API void pf2es_manifest_free(pf2es_manifest* m);

/* Aggregates every record below records_dir into out_dir/aggregate.csv and
 * one SVG per problem. warnings_json (may be NULL) receives a JSON array. */
PF2ES_API pf2es_status pf2es_aggregate(const char* records_dir, const char* out_dir, char** warnings_json);

/* Independent-GP surrogate on row-major data (n x dim inputs, n x outputs). */
PF2ES_API pf2es_status pf2es_surrogate_fit(const double* inputs, const double* outputs, int n, int dim,
                                           int num_objectives, int num_constraints, const double* lower,
                                           const double* upper, uint64_t seed, pf2es_surrogate** out);
PF2ES_API pf2es_status pf2es_surrogate_predict(const pf2es_surrogate* s, const double* x, double* mean,
                                               double* variance);
PF2ES_API void pf2es_surrogate_free(pf2es_surrogate* s);

#ifdef __cplusplus
}
#endif

#endif
