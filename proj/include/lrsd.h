/* Copyright 2026 The lrsd Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the lrsd low-rank + sparse decomposition library.
 *
 * Every call returns an lrsd_status. On failure the message is available from
 * lrsd_last_error() on the same thread until the next failing call. Strings
 * handed out through char** parameters are owned by the caller and released
 * with lrsd_string_free(). Matrices cross the boundary as column-major
 * doubles. */

#ifndef LRSD_H_
#define LRSD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LRSD_API __declspec(dllexport)
#elif defined(__GNUC__)
#define LRSD_API __attribute__((visibility("default")))
#else
#define LRSD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lrsd_status {
  LRSD_OK = 0,
  LRSD_ERR_INVALID_ARGUMENT = 1,
  LRSD_ERR_DIMENSION_MISMATCH = 2,
  LRSD_ERR_INVALID_CONFIG = 3,
  LRSD_ERR_IO = 4,
  LRSD_ERR_FORMAT = 5,
  LRSD_ERR_SVD_NONCONVERGENCE = 6,
  LRSD_ERR_THETA_SEARCH = 7,
  LRSD_ERR_INTERNAL = 8
} lrsd_status;

typedef enum lrsd_component {
  LRSD_LOW_RANK = 0,
  LRSD_SPARSE = 1,
  LRSD_MULTIPLIER = 2 /* IADM / EADM only */
} lrsd_component;

typedef struct lrsd_instance lrsd_instance;
typedef struct lrsd_result lrsd_result;

LRSD_API const char* lrsd_version(void);
LRSD_API const char* lrsd_last_error(void);
LRSD_API const char* lrsd_status_name(lrsd_status status);
LRSD_API void lrsd_string_free(char* s);

/* ---- Instances ---- */

/* spec_json: {"kind": "rpcp_missing"|"spcp", "n" or "rows"/"cols",
 * "rank_ratio", "sparsity_ratio", "sample_ratio", "snr_db", "delta_rule",
 * "seed"}. */
LRSD_API lrsd_status lrsd_instance_generate(const char* spec_json,
                                            lrsd_instance** out);

/* data: rows*cols column-major values. mask_rows/mask_cols list the observed
 * entries (zero-based); mask_count == 0 means every entry is observed.
 * xi <= 0 selects 1/sqrt(max(rows, cols)). */
LRSD_API lrsd_status lrsd_instance_from_data(const double* data, int64_t rows,
                                             int64_t cols,
                                             const int64_t* mask_rows,
                                             const int64_t* mask_cols,
                                             int64_t mask_count, double delta,
                                             double xi, lrsd_instance** out);

LRSD_API lrsd_status lrsd_instance_load(const char* dir, lrsd_instance** out);
LRSD_API lrsd_status lrsd_instance_save(const lrsd_instance* inst,
                                        const char* dir);
/* JSON with dims, xi, delta, noise level, observed count, id, generator. */
LRSD_API lrsd_status lrsd_instance_info(const lrsd_instance* inst,
                                        char** json_out);
LRSD_API void lrsd_instance_free(lrsd_instance* inst);

/* ---- Solving ---- */

/* solver: "iadm", "eadm", "alm" or "pspg". config_json may be NULL or "".
 * When the instance carries ground truth the result records relL / relS. */
LRSD_API lrsd_status lrsd_solve(const lrsd_instance* inst, const char* solver,
                                const char* config_json, lrsd_result** out);

/* iterations, svd/lsv counts, objective, infeasibility, rank, config, ... */
LRSD_API lrsd_status lrsd_result_summary(const lrsd_result* res,
                                         char** json_out);
LRSD_API lrsd_status lrsd_result_dims(const lrsd_result* res, int64_t* rows,
                                      int64_t* cols);
/* Copies a component into buf (column-major, at least rows*cols values). */
LRSD_API lrsd_status lrsd_result_copy(const lrsd_result* res,
                                      lrsd_component which, double* buf,
                                      size_t len);
/* Fails with LRSD_ERR_INVALID_ARGUMENT when no ground truth was available. */
LRSD_API lrsd_status lrsd_result_metrics(const lrsd_result* res,
                                         double* rel_l, double* rel_s);
LRSD_API lrsd_status lrsd_result_save(const lrsd_result* res, const char* dir);
LRSD_API lrsd_status lrsd_result_load(const char* dir, lrsd_result** out);
LRSD_API void lrsd_result_free(lrsd_result* res);

/* ---- Verification, benchmarks, export ---- */

/* Writes a JSON report to report_json and sets *passed to 0 or 1. */
LRSD_API lrsd_status lrsd_check(const lrsd_instance* inst,
                                const lrsd_result* res, int rerun,
                                int* passed, char** report_json);

/* Runs every cell of a bench spec. csv_out and table_out may be NULL. */
LRSD_API lrsd_status lrsd_bench_run(const char* spec_json, int threads,
                                    char** csv_out, char** table_out,
                                    int64_t* violations, int64_t* failures);

/* Column `frame` of the matrix stored at matrix_path as a height x width PGM. */
LRSD_API lrsd_status lrsd_export_pgm(const char* matrix_path,
                                     const char* pgm_path, int64_t height,
                                     int64_t width, int64_t frame);

#ifdef __cplusplus
}
#endif

#endif /* LRSD_H_ */
