// Copyright 2026 The Benders Filter Authors
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

/* C interface to the benders_filter library: two-stage instance generation
 * and I/O, multi-cut Benders runs with cut filtering, the extensive-form
 * reference solve, and benchmark, sweep and report drivers.
 *
 * Handles are opaque and owned by the caller once returned; release them with
 * the matching *_free function. Every function returning bf_status records a
 * message for the calling thread, readable through bf_last_error(). */

#ifndef BENDERS_FILTER_H_
#define BENDERS_FILTER_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BF_API __declspec(dllexport)
#else
#define BF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bf_status {
  BF_OK = 0,
  BF_INVALID_ARGUMENT = 1,
  BF_INVALID_PARAMS = 2,
  BF_DIMENSION_MISMATCH = 3,
  BF_NUMERICAL_FAILURE = 4,
  BF_NODE_LIMIT_EXCEEDED = 5,
  BF_PARSE_ERROR = 6,
  BF_SCHEMA_VERSION_MISMATCH = 7,
  BF_IO_ERROR = 8,
  BF_ZERO_NORM_VECTOR = 9,
  BF_INVALID_K = 10,
  BF_EMPTY_VIOLATED_POOL = 11,
  BF_EMPTY_INPUT = 12,
  BF_INSUFFICIENT_PAIRS = 13,
  BF_UNKNOWN_BASELINE = 14,
  BF_INTERNAL = 15
} bf_status;

typedef enum bf_run_status {
  BF_RUN_OPTIMAL = 0,
  BF_RUN_TIME_LIMIT = 1,
  BF_RUN_ITERATION_LIMIT = 2,
  BF_RUN_ERROR = 3
} bf_run_status;

typedef struct bf_instance bf_instance;
typedef struct bf_result bf_result;

/* Message of the last failing call on this thread; "" after success. */
BF_API const char* bf_last_error(void);
BF_API const char* bf_status_name(bf_status status);
BF_API const char* bf_run_status_name(bf_run_status status);

/* ---- Instances ---------------------------------------------------------- */

typedef struct bf_generate_params {
  int n_nodes;
  int n_arcs;
  int n_switchable;
  int n_scenarios;
  int outage_size; /* arcs removed per scenario: 1 or 2 */
  uint64_t seed;
} bf_generate_params;

BF_API void bf_generate_params_init(bf_generate_params* params);
BF_API bf_status bf_instance_generate(const bf_generate_params* params,
                                      bf_instance** out);
/* Writes `count` files named <prefix>_<seed>_<i>.json into out_dir. */
BF_API bf_status bf_generate_files(const bf_generate_params* params, int count,
                                   const char* prefix, const char* out_dir);
BF_API bf_status bf_instance_read(const char* path, bf_instance** out);
BF_API bf_status bf_instance_write(const bf_instance* instance,
                                   const char* path);
BF_API void bf_instance_free(bf_instance* instance);
BF_API bf_status bf_instance_dims(const bf_instance* instance, int* n_nodes,
                                  int* n_arcs, int* n_switchable,
                                  int* n_scenarios);

/* ---- Strategies --------------------------------------------------------- */

/* Validates a strategy spec and writes its canonical form (NUL-terminated,
 * truncated to `capacity`) when `canonical` is non-null. */
BF_API bf_status bf_strategy_validate(const char* spec, char* canonical,
                                      size_t capacity);

/* ---- Solving ------------------------------------------------------------ */

typedef struct bf_solve_options {
  const char* strategy; /* spec string; NULL means "none" */
  uint64_t seed;        /* seed of randomized strategies */
  double gap_tol;
  double time_limit; /* seconds */
  int max_iterations;
  int jobs; /* subproblem threads */
} bf_solve_options;

typedef struct bf_iteration {
  int iteration;
  int pool_size;
  int n_violated;
  int n_violated_feasibility;
  int n_violated_optimality;
  int n_selected;
  int n_feasibility_selected;
  int n_optimality_selected;
  int aggregate_added;
  int repeated_assignment;
  double min_selected_violation;
  double z_mp;
  double z_ub;
  double master_time;
  double subproblem_time;
  double filter_time;
} bf_iteration;

BF_API void bf_solve_options_init(bf_solve_options* options);
/* Runs Benders. A run that ends in BF_RUN_ERROR still yields a result. */
BF_API bf_status bf_solve(const bf_instance* instance,
                          const bf_solve_options* options, bf_result** out);
BF_API void bf_result_free(bf_result* result);
BF_API bf_run_status bf_result_status(const bf_result* result);
BF_API double bf_result_objective(const bf_result* result);
BF_API double bf_result_lower_bound(const bf_result* result);
BF_API double bf_result_gap(const bf_result* result);
BF_API double bf_result_time(const bf_result* result);
BF_API int bf_result_num_iterations(const bf_result* result);
BF_API int64_t bf_result_total_cuts(const bf_result* result);
BF_API const char* bf_result_error(const bf_result* result);
BF_API bf_status bf_result_iteration(const bf_result* result, int index,
                                     bf_iteration* out);
/* Copies min(capacity, length) incumbent entries (z then b) and reports the
 * full length. Length is 0 without an incumbent. */
BF_API bf_status bf_result_incumbent(const bf_result* result, double* values,
                                     int capacity, int* length);

/* Optimal objective of the extensive form by branch and bound. */
BF_API bf_status bf_solve_extensive(const bf_instance* instance,
                                    double* objective);

/* ---- Experiments -------------------------------------------------------- */

typedef struct bf_benchmark_options {
  const char* const* instance_paths;
  int n_instances;
  const char* const* configs; /* specs or preset names */
  int n_configs;
  const char* baseline; /* NULL means "default" */
  bf_solve_options run; /* strategy field ignored */
  double min_time_filter;
  double shift;
  const char* out_dir;
} bf_benchmark_options;

BF_API void bf_benchmark_options_init(bf_benchmark_options* options);
/* Writes results.csv, summary.csv and profile.csv. */
BF_API bf_status bf_benchmark(const bf_benchmark_options* options);

/* Runs the unfiltered baseline and one run per grid cell; `grid` looks like
 * "frac:0.05,1;fixed:1,2". `strategy` names the base strategy kind, possibly
 * with "+". Writes sweep.csv and sweep_results.csv. */
BF_API bf_status bf_sweep(const bf_benchmark_options* options,
                          const char* strategy, const char* grid);

/* Recomputes summary.csv and profile.csv from a results CSV. */
BF_API bf_status bf_report(const char* results_csv, const char* baseline,
                           double min_time_filter, double shift,
                           const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* BENDERS_FILTER_H_ */
