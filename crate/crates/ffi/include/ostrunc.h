#ifndef OSTRUNC_H
#define OSTRUNC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum {
  OSTRUNC_STATUS_OK = 0,
  OSTRUNC_STATUS_NULL_POINTER = 1,
  /**
   * Malformed document, bad parameters, or a bad argument such as a
   * buffer of the wrong length.
   */
  OSTRUNC_STATUS_INVALID_SPEC = 2,
  OSTRUNC_STATUS_INFEASIBLE = 3,
  OSTRUNC_STATUS_BUDGET_EXHAUSTED = 4,
  /**
   * N exceeds the region cap.
   */
  OSTRUNC_STATUS_CAPACITY = 5,
  /**
   * A probability or point argument was out of range or NaN.
   */
  OSTRUNC_STATUS_DOMAIN = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  OSTRUNC_STATUS_PANIC = 7,
} OstruncStatus;

/**
 * Sampling method selector.
 */
typedef enum {
  OSTRUNC_METHOD_MAPPED = 0,
  OSTRUNC_METHOD_REJECTION = 1,
} OstruncMethod;

/**
 * A validated problem: distributions, `k`, and bounds.
 */
typedef struct OstruncProblem OstruncProblem;

/**
 * A sampler with its region table, random stream and scratch buffers.
 * Not safe to use from two threads at once.
 */
typedef struct OstruncSampler OstruncSampler;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL if the last
 * call succeeded. Valid until the next `ostrunc_*` call on the same thread.
 */
const char *ostrunc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ostrunc_version(void);

/**
 * Parses a JSON problem document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_problem` must be writable.
 */
OstruncStatus ostrunc_problem_from_json(const char *json, OstruncProblem **out_problem);

/**
 * Copy of `problem` with new bounds. Either bound may be infinite.
 *
 * # Safety
 * `problem` must be a live handle; `out_problem` must be writable.
 */
OstruncStatus ostrunc_problem_with_bounds(const OstruncProblem *problem,
                                          double lower,
                                          double upper,
                                          OstruncProblem **out_problem);

/**
 * # Safety
 * `problem` must be NULL or a handle not yet freed.
 */
void ostrunc_problem_free(OstruncProblem *problem);

/**
 * Number of variables N and the order `k`.
 *
 * # Safety
 * `problem` must be a live handle; the out-pointers must be writable.
 */
OstruncStatus ostrunc_problem_shape(const OstruncProblem *problem, size_t *out_n, size_t *out_k);

/**
 * `P(Y <= y)` for the untruncated order statistic.
 *
 * # Safety
 * `problem` must be a live handle; `out_value` must be writable.
 */
OstruncStatus ostrunc_order_stat_cdf(const OstruncProblem *problem, double y, double *out_value);

/**
 * `P(Y <= y | A < Y < B)`.
 *
 * # Safety
 * `problem` must be a live handle; `out_value` must be writable.
 */
OstruncStatus ostrunc_truncated_cdf(const OstruncProblem *problem, double y, double *out_value);

/**
 * Builds the region table for `problem` (copied) and seeds the stream.
 * `max_n` caps N; pass 0 for the default.
 *
 * # Safety
 * `problem` must be a live handle; `out_sampler` must be writable.
 */
OstruncStatus ostrunc_sampler_new(const OstruncProblem *problem,
                                  uint64_t seed,
                                  size_t max_n,
                                  OstruncSampler **out_sampler);

/**
 * # Safety
 * `sampler` must be NULL or a handle not yet freed.
 */
void ostrunc_sampler_free(OstruncSampler *sampler);

/**
 * Restarts the random stream from `seed`.
 *
 * # Safety
 * `sampler` must be a live handle.
 */
OstruncStatus ostrunc_sampler_reseed(OstruncSampler *sampler, uint64_t seed);

/**
 * Maximum rejection attempts per draw.
 *
 * # Safety
 * `sampler` must be a live handle.
 */
OstruncStatus ostrunc_sampler_set_rejection_budget(OstruncSampler *sampler, uint64_t budget);

/**
 * Number of regions with positive volume.
 *
 * # Safety
 * `sampler` must be a live handle; `out_count` must be writable.
 */
OstruncStatus ostrunc_sampler_region_count(const OstruncSampler *sampler, size_t *out_count);

/**
 * `P(A < Y < B)` from the region volumes.
 *
 * # Safety
 * `sampler` must be a live handle; `out_value` must be writable.
 */
OstruncStatus ostrunc_sampler_acceptance_probability(const OstruncSampler *sampler,
                                                     double *out_value);

/**
 * Draws `n` values into `out_values`. `out_attempts` (may be NULL) receives
 * the total number of attempts. On `BudgetExhausted` the values drawn before
 * the failure are kept and `out_attempts` is left untouched.
 *
 * # Safety
 * `sampler` must be a live handle; `out_values` must hold `n` doubles.
 */
OstruncStatus ostrunc_sampler_draw(OstruncSampler *sampler,
                                   OstruncMethod method,
                                   double *out_values,
                                   size_t n,
                                   uint64_t *out_attempts);

/**
 * One mapped draw with its trace. `u`, `u_prime` and `x` must each hold
 * `len` doubles and `len` must equal N; `out_region` receives the 0-based
 * region index. Any of the trace buffers may be NULL.
 *
 * # Safety
 * `sampler` must be a live handle; non-NULL buffers must hold `len` doubles.
 */
OstruncStatus ostrunc_sampler_draw_trace(OstruncSampler *sampler,
                                         double *u,
                                         double *u_prime,
                                         double *x,
                                         size_t len,
                                         size_t *out_region,
                                         double *out_y);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSTRUNC_H */
