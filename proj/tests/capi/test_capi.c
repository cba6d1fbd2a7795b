/* Exercises the C API from C. */
#include "pf2es/pf2es.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static const char* kSmallConfig =
    "{\"problem\": \"VLMOP2\", \"acquisition\": \"random\", \"iterations\": 0,"
    " \"recommendation_nsga\": {\"population\": 20, \"generations\": 20},"
    " \"frontier_nsga\": {\"population\": 20, \"generations\": 20},"
    " \"n_features\": 128, \"calibration_samples\": 2, \"record_timings\": false}";

static void test_problems(void) {
  char* json = NULL;
  EXPECT(pf2es_list_problems(&json) == PF2ES_OK);
  EXPECT(json != NULL && strstr(json, "\"C-BraninCurrin\"") != NULL);
  pf2es_string_free(json);

  int d = 0, m = 0, c = 0;
  EXPECT(pf2es_problem_info("DiscBrake", &d, &m, &c) == PF2ES_OK);
  EXPECT(d == 4 && m == 2 && c == 4);
  EXPECT(pf2es_problem_info("Kursawe", &d, &m, &c) == PF2ES_ERR_UNKNOWN_PROBLEM);
  EXPECT(strstr(pf2es_last_error(), "Kursawe") != NULL);

  double lo[2], hi[2];
  EXPECT(pf2es_problem_bounds("VLMOP2", lo, hi, 2) == PF2ES_OK);
  EXPECT(lo[0] == -2.0 && hi[1] == 2.0);
  EXPECT(pf2es_problem_bounds("VLMOP2", lo, hi, 3) == PF2ES_ERR_INVALID_ARGUMENT);

  const double x[2] = {0.70710678118654752, 0.70710678118654752};
  double y[2];
  EXPECT(pf2es_evaluate("VLMOP2", x, 2, y, 2) == PF2ES_OK);
  EXPECT(fabs(y[0]) < 1e-15);
  EXPECT(pf2es_evaluate("VLMOP2", x, 2, y, 3) == PF2ES_ERR_INVALID_ARGUMENT);
  EXPECT(pf2es_evaluate(NULL, x, 2, y, 2) == PF2ES_ERR_INVALID_ARGUMENT);
}

static void test_run(void) {
  pf2es_record* r = NULL;
  EXPECT(pf2es_run(kSmallConfig, &r) == PF2ES_OK);
  int n = 0;
  EXPECT(pf2es_record_num_iterations(r, &n) == PF2ES_OK && n == 1);
  EXPECT(pf2es_record_num_evaluations(r, &n) == PF2ES_OK && n == 5);
  double v = 0.0;
  EXPECT(pf2es_record_log_hv_difference(r, 0, &v) == PF2ES_OK && isfinite(v));
  EXPECT(pf2es_record_log_hv_difference(r, 1, &v) == PF2ES_ERR_INVALID_ARGUMENT);
  int aborted = 1;
  EXPECT(pf2es_record_aborted(r, &aborted) == PF2ES_OK && aborted == 0);

  char* json = NULL;
  EXPECT(pf2es_record_to_json(r, 1, &json) == PF2ES_OK);
  pf2es_record* back = NULL;
  EXPECT(pf2es_record_from_json(json, &back) == PF2ES_OK);
  char* json2 = NULL;
  EXPECT(pf2es_record_to_json(back, 1, &json2) == PF2ES_OK);
  EXPECT(strcmp(json, json2) == 0);

  /* Same config, same bytes. */
  pf2es_record* again = NULL;
  char* json3 = NULL;
  EXPECT(pf2es_run(kSmallConfig, &again) == PF2ES_OK);
  EXPECT(pf2es_record_to_json(again, 0, &json3) == PF2ES_OK);
  EXPECT(strcmp(json, json3) == 0);

  char* csv = NULL;
  EXPECT(pf2es_record_to_csv(r, 1, &csv) == PF2ES_OK);
  EXPECT(strncmp(csv, "problem,acq,q,seed,iteration,metric,value\n", 42) == 0);

  pf2es_string_free(csv);
  pf2es_string_free(json);
  pf2es_string_free(json2);
  pf2es_string_free(json3);
  pf2es_record_free(r);
  pf2es_record_free(back);
  pf2es_record_free(again);

  EXPECT(pf2es_run("{\"problem\": \"VLMOP2\", \"q\": 2}", &r) == PF2ES_ERR_CONFIG);
  EXPECT(pf2es_run("{\"problem\": \"Nope\"}", &r) == PF2ES_ERR_UNKNOWN_PROBLEM);
  EXPECT(pf2es_run("{", &r) == PF2ES_ERR_CONFIG);
  EXPECT(pf2es_record_from_json("[]", &r) == PF2ES_ERR_CONFIG);

  char* def = NULL;
  EXPECT(pf2es_default_config("ZDT1", &def) == PF2ES_OK);
  EXPECT(strstr(def, "\"iterations\": 40") != NULL);
  pf2es_string_free(def);
}

static void test_manifest(void) {
  pf2es_manifest* m = NULL;
  EXPECT(pf2es_manifest_parse("schema: pf2es-manifest/1\nruns:\n  - {problem: VLMOP2, seeds: 3}\n", &m) == PF2ES_OK);
  int n = 0;
  EXPECT(pf2es_manifest_num_runs(m, &n) == PF2ES_OK && n == 3);
  const double values[2] = {32, 128};
  EXPECT(pf2es_manifest_set_sweep(m, "n_mc", values, 2) == PF2ES_OK);
  EXPECT(pf2es_manifest_num_runs(m, &n) == PF2ES_OK && n == 6);
  EXPECT(pf2es_manifest_set_sweep(m, "n_mc", values, 0) == PF2ES_ERR_CONFIG);
  EXPECT(pf2es_manifest_set_sweep(m, "lengthscale", values, 2) == PF2ES_ERR_CONFIG);
  EXPECT(pf2es_manifest_set_workers(m, 0) == PF2ES_ERR_CONFIG);
  EXPECT(pf2es_manifest_set_output_dir(m, "elsewhere") == PF2ES_OK);
  char* dir = NULL;
  EXPECT(pf2es_manifest_output_dir(m, &dir) == PF2ES_OK && strcmp(dir, "elsewhere") == 0);
  pf2es_string_free(dir);
  pf2es_manifest_free(m);

  m = NULL;
  EXPECT(pf2es_manifest_parse("schema: [", &m) == PF2ES_ERR_CONFIG);
  EXPECT(m == NULL);
  EXPECT(pf2es_manifest_load("/nonexistent.yaml", &m) == PF2ES_ERR_IO);
  EXPECT(pf2es_aggregate("/nonexistent-dir", "/tmp", NULL) == PF2ES_ERR_IO);
}

static void test_surrogate(void) {
  /* 1-D, one objective: y = sin(3x) on [0, 1]. */
  double x[8], y[8];
  for (int i = 0; i < 8; ++i) {
    x[i] = i / 7.0;
    y[i] = sin(3.0 * x[i]);
  }
  const double lo = 0.0, hi = 1.0;
  pf2es_surrogate* s = NULL;
  EXPECT(pf2es_surrogate_fit(x, y, 8, 1, 1, 0, &lo, &hi, 1, &s) == PF2ES_OK);
  double q = 3.0 / 7.0, mean = 0.0, var = -1.0;
  EXPECT(pf2es_surrogate_predict(s, &q, &mean, &var) == PF2ES_OK);
  EXPECT(fabs(mean - sin(9.0 / 7.0)) < 1e-3);
  EXPECT(var >= 0.0 && var < 1e-4);
  pf2es_surrogate_free(s);
  EXPECT(pf2es_surrogate_fit(x, y, 1, 1, 1, 0, &lo, &hi, 1, &s) == PF2ES_ERR_INVALID_ARGUMENT);
  pf2es_surrogate_free(NULL);
}

int main(void) {
  EXPECT(strcmp(pf2es_status_name(PF2ES_ERR_FIT), "surrogate fit failure") == 0);
  EXPECT(pf2es_version() != NULL);
  test_problems();
  test_run();
  test_manifest();
  test_surrogate();
  if (failures) fprintf(stderr, "%d C API check(s) failed\n", failures);
  else printf("all C API checks passed\n");
  return failures ? 1 : 0;
}
