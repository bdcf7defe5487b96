// Copyright 2026 The hmsvm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the exact hard-margin SVM trainer.
 *
 * Objects are opaque and owned by the caller; every *_free accepts NULL.
 * Functions that can fail return an hmsvm_status and leave a message for
 * hmsvm_last_error() on the calling thread. Object out-parameters are set
 * to NULL on failure. */

#ifndef HMSVM_HMSVM_H_
#define HMSVM_HMSVM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(HMSVM_BUILDING_LIBRARY)
#define HMSVM_API __attribute__((visibility("default")))
#else
#define HMSVM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hmsvm_status {
  HMSVM_OK = 0,
  HMSVM_ERR_INVALID_INPUT = 1,
  HMSVM_ERR_IO = 2,
  HMSVM_ERR_PARSE = 3,
  HMSVM_ERR_DIMENSION = 4,
  HMSVM_ERR_NUMERICAL = 5,
  HMSVM_ERR_TOO_LARGE = 6,
  HMSVM_ERR_TIME_LIMIT = 7,
  HMSVM_ERR_INTERNAL = 8
} hmsvm_status;

/* Outcome of a solve, mirrored from the report's "status" field. */
typedef enum hmsvm_solve_status {
  HMSVM_SOLVE_OPTIMAL = 0,
  HMSVM_SOLVE_TIME_LIMIT = 1,
  HMSVM_SOLVE_INFEASIBLE_INPUT = 2,
  HMSVM_SOLVE_ERROR = 3
} hmsvm_solve_status;

typedef struct hmsvm_dataset hmsvm_dataset;
typedef struct hmsvm_config hmsvm_config;
typedef struct hmsvm_report hmsvm_report;
typedef struct hmsvm_oracle hmsvm_oracle;

HMSVM_API const char* hmsvm_version(void);
/* Message of the most recent failure on this thread, "" if none. */
HMSVM_API const char* hmsvm_last_error(void);
/* 0 error, 1 warn, 2 info, 3 debug. */
HMSVM_API void hmsvm_set_log_level(int level);
/* Releases strings returned through char** out-parameters. */
HMSVM_API void hmsvm_string_free(char* s);

/* ---- datasets ---- */

/* format is "csv" or "libsvm". */
HMSVM_API hmsvm_status hmsvm_dataset_load(const char* path, const char* format,
                                          hmsvm_dataset** out);
/* x is n*m row-major, y holds n labels in {-1, +1}. name may be NULL. */
HMSVM_API hmsvm_status hmsvm_dataset_from_arrays(int n, int m, const double* x,
                                                 const double* y,
                                                 const char* name,
                                                 hmsvm_dataset** out);
/* family is 'A' (clustered outliers) or 'B' (scattered outliers). */
HMSVM_API hmsvm_status hmsvm_dataset_generate(char family, int n, int m,
                                              double outlier_fraction,
                                              uint64_t seed,
                                              hmsvm_dataset** out);
HMSVM_API hmsvm_status hmsvm_dataset_save(const hmsvm_dataset* d,
                                          const char* path);
HMSVM_API int hmsvm_dataset_n(const hmsvm_dataset* d);
HMSVM_API int hmsvm_dataset_m(const hmsvm_dataset* d);
HMSVM_API const char* hmsvm_dataset_name(const hmsvm_dataset* d);
HMSVM_API void hmsvm_dataset_free(hmsvm_dataset* d);

/* ---- configuration ---- */

HMSVM_API hmsvm_config* hmsvm_config_new(void);
/* Keys: C, t_max, t_s, t_b, feas_tol, opt_tol, seed, big_m (0 selects the
 * derived constants), sample_size_cap, sampling_patience,
 * subset_node_cap, threads, and the flags use_cuts, tight_wub,
 * single_thread, dominance_filter, qp_warm_start (nonzero is true). */
HMSVM_API hmsvm_status hmsvm_config_set(hmsvm_config* c, const char* key,
                                        double value);
HMSVM_API hmsvm_status hmsvm_config_get(const hmsvm_config* c, const char* key,
                                        double* value);
HMSVM_API void hmsvm_config_free(hmsvm_config* c);

/* ---- solving ---- */

/* HMSVM_OK means a report was produced, whatever its solve status. */
HMSVM_API hmsvm_status hmsvm_solve(const hmsvm_dataset* d,
                                   const hmsvm_config* c, hmsvm_report** out);
HMSVM_API hmsvm_solve_status hmsvm_report_status(const hmsvm_report* r);
HMSVM_API double hmsvm_report_objective(const hmsvm_report* r);
HMSVM_API double hmsvm_report_lower_bound(const hmsvm_report* r);
HMSVM_API double hmsvm_report_gap_percent(const hmsvm_report* r);
HMSVM_API long hmsvm_report_nodes(const hmsvm_report* r);
HMSVM_API long hmsvm_report_cuts(const hmsvm_report* r);
HMSVM_API double hmsvm_report_total_seconds(const hmsvm_report* r);
/* Copies m weights into w (may be NULL) and the intercept into b (may be
 * NULL). */
HMSVM_API hmsvm_status hmsvm_report_hyperplane(const hmsvm_report* r, double* w,
                                               double* b);
/* Copies n indicators (1 = sample sacrificed) into z. */
HMSVM_API hmsvm_status hmsvm_report_assignment(const hmsvm_report* r,
                                               uint8_t* z);
HMSVM_API size_t hmsvm_report_cut_count(const hmsvm_report* r);
/* Members of Step-2 cut k, 0-based. Writes at most cap entries to members
 * and the true size to *size. */
HMSVM_API hmsvm_status hmsvm_report_cut(const hmsvm_report* r, size_t k,
                                        int* members, size_t cap,
                                        size_t* size);
/* JSON document; free with hmsvm_string_free. */
HMSVM_API hmsvm_status hmsvm_report_json(const hmsvm_report* r, char** json);
/* 0 Optimal, 3 TimeLimit, 1 infeasible input, 2 solver error. */
HMSVM_API int hmsvm_report_exit_code(const hmsvm_report* r);
HMSVM_API void hmsvm_report_free(hmsvm_report* r);

/* ---- exhaustive reference ---- */

/* Refuses n > 16 with HMSVM_ERR_TOO_LARGE. */
HMSVM_API hmsvm_status hmsvm_oracle_solve(const hmsvm_dataset* d, double C,
                                          int tight_wub, hmsvm_oracle** out);
HMSVM_API double hmsvm_oracle_objective(const hmsvm_oracle* o);
HMSVM_API double hmsvm_oracle_w_ub(const hmsvm_oracle* o);
HMSVM_API size_t hmsvm_oracle_count(const hmsvm_oracle* o);
HMSVM_API hmsvm_status hmsvm_oracle_optimum(const hmsvm_oracle* o, size_t k,
                                            uint8_t* z, double* w, double* b);
HMSVM_API void hmsvm_oracle_free(hmsvm_oracle* o);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* HMSVM_HMSVM_H_ */
