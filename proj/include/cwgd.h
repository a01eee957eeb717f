/* cwgd: block-structured gradient descent with per-block backtracking.
 *
 * Conventions:
 *   - Functions returning a pointer yield NULL on failure.
 *   - Functions returning int yield CWGD_OK (0) on success, an error code
 *     otherwise. Output parameters are written only on success.
 *   - Failure details are stored per thread; query them with
 *     cwgd_last_error_code / cwgd_last_error_message / cwgd_last_error_position.
 *   - All buffers are caller allocated. Query sizes first (dimension, block
 *     count, record count), then fetch.
 *   - Objectives, configs and trajectories are immutable once built, so any
 *     number of threads may read or run them concurrently.
 */
#ifndef CWGD_H
#define CWGD_H

#include <stddef.h>

#if defined(_WIN32)
#define CWGD_API __declspec(dllexport)
#else
#define CWGD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  CWGD_OK = 0,
  CWGD_ERR_INVALID_ARGUMENT,
  CWGD_ERR_INVALID_PARAMETER,
  CWGD_ERR_UNKNOWN_FUNCTION,
  CWGD_ERR_LEX,
  CWGD_ERR_PARSE,
  CWGD_ERR_ARITY,
  CWGD_ERR_UNBOUND_VARIABLE,
  CWGD_ERR_NONFINITE,
  CWGD_ERR_DIMENSION_MISMATCH,
  CWGD_ERR_REGION_VIOLATION,
  CWGD_ERR_ZERO_GRADIENT,
  CWGD_ERR_ZERO_GRADIENT_WITH_CAP,
  CWGD_ERR_EXHAUSTED_GRID,
  CWGD_ERR_NONFINITE_VALUE,
  CWGD_ERR_MISSING_RATES,
  CWGD_ERR_TOO_SHORT,
  CWGD_ERR_UNKNOWN
};

enum {
  CWGD_METHOD_STANDARD = 0,
  CWGD_METHOD_BACKTRACKING = 1,
  CWGD_METHOD_COORDINATEWISE = 2
};

enum { CWGD_ORDER_STATIC = 0, CWGD_ORDER_LIPSCHITZ_ADAPTIVE = 1 };

enum { CWGD_REGION_NONE = 0, CWGD_REGION_FROM_OBJECTIVE = 1 };

enum {
  CWGD_STATUS_CONVERGED_GRAD_TOL = 0,
  CWGD_STATUS_MAX_ITERATIONS = 1,
  CWGD_STATUS_DIVERGED_VALUE = 2,
  CWGD_STATUS_DIVERGED_NORM = 3,
  CWGD_STATUS_NUMERICAL_OVERFLOW = 4,
  CWGD_STATUS_CYCLE_DETECTED = 5,
  CWGD_STATUS_EXHAUSTED_GRID = 6
};

enum {
  CWGD_TREND_VANISHING = 0,
  CWGD_TREND_DIVERGING_VALUE = 1,
  CWGD_TREND_NEITHER = 2
};

typedef struct cwgd_objective cwgd_objective;
typedef struct cwgd_config cwgd_config;
typedef struct cwgd_trajectory cwgd_trajectory;

CWGD_API const char* cwgd_version(void);

/* Thread-local details of the most recent failure on this thread. */
CWGD_API int cwgd_last_error_code(void);
CWGD_API const char* cwgd_last_error_message(void);
/* Character offset for lexer/parser errors, -1 otherwise. */
CWGD_API long cwgd_last_error_position(void);

/* ---- objectives ------------------------------------------------------- */

/* Named built-in. Optional parameters are given as parallel name/value
 * arrays (e.g. "a" = 3 for abs_plus_linear). */
CWGD_API cwgd_objective* cwgd_objective_builtin(const char* name,
                                                const char* const* param_names,
                                                const double* param_values,
                                                size_t nparams);

/* Separable quadratic 0.5 * sum_i c_i ||z_i||^2 over the given partition. */
CWGD_API cwgd_objective* cwgd_objective_quadratic(const size_t* dims,
                                                  size_t nblocks,
                                                  const double* coeffs);

/* Parsed expression in variables x, y (or x1..xN), one block per variable.
 * Gradients use central differences with spacing fd_step (pass 0 for the
 * default). Parse failures set a character position. */
CWGD_API cwgd_objective* cwgd_objective_expr(const char* text, size_t nvars,
                                             double fd_step);

CWGD_API void cwgd_objective_free(cwgd_objective* obj);

CWGD_API const char* cwgd_objective_name(const cwgd_objective* obj);
CWGD_API size_t cwgd_objective_dim(const cwgd_objective* obj);
CWGD_API size_t cwgd_objective_blocks(const cwgd_objective* obj);
CWGD_API int cwgd_objective_block_dims(const cwgd_objective* obj, size_t* dims);
CWGD_API int cwgd_objective_has_region(const cwgd_objective* obj);
CWGD_API int cwgd_objective_value(const cwgd_objective* obj, const double* z,
                                  size_t n, double* out);
CWGD_API int cwgd_objective_gradient(const cwgd_objective* obj, const double* z,
                                     size_t n, double* out);
/* Writes the catalogued minimizer when one is known; *has reports presence. */
CWGD_API int cwgd_objective_known_minimizer(const cwgd_objective* obj,
                                            double* out, int* has);

CWGD_API size_t cwgd_builtin_count(void);
CWGD_API int cwgd_builtin_info(size_t index, const char** name,
                               const char** signature, const char** partition,
                               const char** minima);

/* ---- configuration ----------------------------------------------------- */

/* Defaults: backtracking, alpha 0.5, beta 0.5, delta0 2, grad tolerance 1e-8,
 * max 100000 iterations, divergence thresholds -1e8 / 1e8, static identity
 * order, no exclusion region, no cycle detection. */
CWGD_API cwgd_config* cwgd_config_new(void);
CWGD_API void cwgd_config_free(cwgd_config* cfg);

CWGD_API int cwgd_config_set_method(cwgd_config* cfg, int method);
CWGD_API int cwgd_config_set_hyperparams(cwgd_config* cfg, double alpha,
                                         double beta, double delta0);
CWGD_API int cwgd_config_set_max_grid_depth(cwgd_config* cfg, int depth);
/* Fixed rate for the standard method; unset configs fall back to delta0. */
CWGD_API int cwgd_config_set_standard_rate(cwgd_config* cfg, double rate);
CWGD_API int cwgd_config_clear_standard_rate(cwgd_config* cfg);
CWGD_API int cwgd_config_set_order_policy(cwgd_config* cfg, int policy);
/* n = 0 restores the identity order. */
CWGD_API int cwgd_config_set_static_order(cwgd_config* cfg, const size_t* order,
                                          size_t n);
CWGD_API int cwgd_config_set_max_iterations(cwgd_config* cfg, int iterations);
CWGD_API int cwgd_config_set_grad_tolerance(cwgd_config* cfg, double tol);
CWGD_API int cwgd_config_set_divergence_thresholds(cwgd_config* cfg,
                                                   double value_threshold,
                                                   double norm_threshold);
CWGD_API int cwgd_config_set_cycle_detection(cwgd_config* cfg, int enabled,
                                             int max_period, double tol);
CWGD_API int cwgd_config_set_region_mode(cwgd_config* cfg, int mode);
/* When disabled the base-rate scan accepts on plain decrease (alpha = 1). */
CWGD_API int cwgd_config_set_base_alpha(cwgd_config* cfg, int enabled);

CWGD_API int cwgd_config_get_method(const cwgd_config* cfg);
CWGD_API double cwgd_config_get_alpha(const cwgd_config* cfg);
CWGD_API double cwgd_config_get_beta(const cwgd_config* cfg);
CWGD_API double cwgd_config_get_delta0(const cwgd_config* cfg);
CWGD_API double cwgd_config_get_grad_tolerance(const cwgd_config* cfg);
CWGD_API int cwgd_config_get_max_iterations(const cwgd_config* cfg);
/* Effective rate the standard method would use. */
CWGD_API double cwgd_config_get_standard_rate(const cwgd_config* cfg);

/* ---- line search ------------------------------------------------------- */

/* Sufficient-decrease test at z for a single shared rate. */
CWGD_API int cwgd_armijo_holds(const cwgd_objective* obj, const double* z,
                               size_t n, double rate, double alpha, int* holds);
/* Same test with one rate per block. */
CWGD_API int cwgd_cw_armijo_holds(const cwgd_objective* obj, const double* z,
                                  size_t n, const double* rates, double alpha,
                                  int* holds);
/* Classical backtracking rate at z under cfg; also reports the grid index. */
CWGD_API int cwgd_backtracking_rate(const cwgd_objective* obj, const double* z,
                                    size_t n, const cwgd_config* cfg,
                                    double* rate, int* grid_index);
/* Per-block rates built in the given order (NULL for identity); the shared
 * backtracking rate floors every block and is reported through *base. */
CWGD_API int cwgd_coordinatewise_rates(const cwgd_objective* obj,
                                       const double* z, size_t n,
                                       const cwgd_config* cfg,
                                       const size_t* order, double* per_block,
                                       double* base);

/* ---- running ----------------------------------------------------------- */

CWGD_API cwgd_trajectory* cwgd_run(const cwgd_objective* obj, const double* z0,
                                   size_t n, const cwgd_config* cfg);
CWGD_API void cwgd_trajectory_free(cwgd_trajectory* traj);

CWGD_API int cwgd_trajectory_status(const cwgd_trajectory* traj);
CWGD_API const char* cwgd_status_name(int status);
CWGD_API size_t cwgd_trajectory_iterations(const cwgd_trajectory* traj);
/* Number of recorded iterates: iterations + 1. */
CWGD_API size_t cwgd_trajectory_records(const cwgd_trajectory* traj);
CWGD_API size_t cwgd_trajectory_dim(const cwgd_trajectory* traj);
CWGD_API size_t cwgd_trajectory_blocks(const cwgd_trajectory* traj);
/* Detected cycle length, 0 when none. */
CWGD_API int cwgd_trajectory_cycle_period(const cwgd_trajectory* traj);
CWGD_API double cwgd_trajectory_wall_seconds(const cwgd_trajectory* traj);
CWGD_API int cwgd_trajectory_point(const cwgd_trajectory* traj, size_t record,
                                   double* z);
CWGD_API int cwgd_trajectory_value(const cwgd_trajectory* traj, size_t record,
                                   double* f, double* grad_norm);
/* Rates used for the step taken from this record. *has reports presence
 * (absent on the final record and on standard-method records). */
CWGD_API int cwgd_trajectory_rates(const cwgd_trajectory* traj, size_t record,
                                   double* per_block, double* base, int* has);
/* Block order used for the step from this record; *len is 0 when the step
 * was not coordinate-wise. */
CWGD_API int cwgd_trajectory_order(const cwgd_trajectory* traj, size_t record,
                                   size_t* order, size_t* len);

/* ---- diagnostics ------------------------------------------------------- */

/* Worst signed violation of the recorded acceptance bounds (<= 0 means every
 * step honoured its bound). Fails with CWGD_ERR_MISSING_RATES on
 * standard-method trajectories. */
CWGD_API int cwgd_descent_audit(const cwgd_trajectory* traj,
                                double* max_violation, size_t* steps);
CWGD_API int cwgd_critical_point_check(const cwgd_objective* obj,
                                       const double* z, size_t n, double tol,
                                       int* is_critical);
/* Max step norm over the final tenth of the run plus a CWGD_TREND_*
 * classification; requires at least 20 iterations. */
CWGD_API int cwgd_step_norm_trend(const cwgd_trajectory* traj,
                                  double* tail_max_step, int* classification);
CWGD_API const char* cwgd_trend_name(int classification);
/* Max pairwise distance among the last `window` iterates. */
CWGD_API int cwgd_cluster_tail_diameter(const cwgd_trajectory* traj,
                                        size_t window, double* diameter);
/* Compares analytic and central-difference gradients at npoints points laid
 * out contiguously; reports the worst relative error and whether all points
 * stayed within tol. */
CWGD_API int cwgd_grad_check(const cwgd_objective* obj, const double* points,
                             size_t npoints, double h, double tol,
                             double* max_rel_error, int* all_ok);

#ifdef __cplusplus
}
#endif

#endif /* CWGD_H */
