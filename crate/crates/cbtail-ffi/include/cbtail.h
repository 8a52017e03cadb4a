/* C interface for the cbtail tail-dependence estimators. */

#ifndef CBTAIL_H
#define CBTAIL_H

/* Generated by cbindgen from cbtail-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Finite-sample tuning warnings, returned as a bitmask.
 */
#define CBT_WARN_TAIL_FRACTION_NOT_SMALL 1

#define CBT_WARN_RESOLUTION_BELOW_TAIL_RATE (1 << 1)

#define CBT_WARN_RESOLUTION_SQUARED_BELOW_ROOT_N (1 << 2)

#define CBT_WARN_TAIL_BELOW_LOG_SQUARED (1 << 3)

/*
 Result codes; every fallible entry point returns one.
 */
typedef enum {
  CBT_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  CBT_STATUS_NULL_POINTER = 1,
  /*
   A parameter violated its documented domain.
   */
  CBT_STATUS_INVALID_ARGUMENT = 2,
  /*
   Tied sample values; ranks are undefined under ties.
   */
  CBT_STATUS_TIED_VALUES = 3,
  /*
   An evaluation argument fell outside its admissible range.
   */
  CBT_STATUS_OUT_OF_RANGE = 4,
  /*
   The exponent pair violates the feasibility inequalities.
   */
  CBT_STATUS_INFEASIBLE_EXPONENTS = 5,
  /*
   The requested operation is not available for this input.
   */
  CBT_STATUS_UNSUPPORTED = 6,
  /*
   A numerical routine failed to converge.
   */
  CBT_STATUS_NUMERIC_FAILURE = 7,
  /*
   A panic was caught at the language boundary.
   */
  CBT_STATUS_INTERNAL_PANIC = 8,
} CbtStatus;

/*
 Lower or upper tail corner.
 */
typedef enum {
  CBT_SIDE_LOWER = 0,
  CBT_SIDE_UPPER = 1,
} CbtSide;

/*
 Base copula estimate behind the tail estimator.
 */
typedef enum {
  CBT_SMOOTHING_RAW = 0,
  CBT_SMOOTHING_CHECKERBOARD = 1,
} CbtSmoothing;

/*
 Opaque bivariate sample handle. Ranks are computed once at construction,
 so tied coordinates are rejected up front and later calls reuse them.
 */
typedef struct CbtSample CbtSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the calling thread's most recent failure. The pointer
 stays valid until this thread's next call into the library; copy the
 string if it must outlive that.
 */
const char *cbt_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *cbt_version(void);

/*
 Build a sample from two equal-length coordinate arrays. The arrays are
 copied; the caller keeps ownership of its buffers. Coordinates must be
 finite and free of ties within each axis. Writes a handle that must be
 released with `cbt_sample_free`.

 # Safety
 `xs` and `ys` must point to `len` readable doubles and `out` must be a
 valid destination for one pointer.
 */
CbtStatus cbt_sample_new(const double *xs, const double *ys, size_t len, CbtSample **out);

/*
 Number of observations in a sample handle; 0 for null.

 # Safety
 `sample` must be null or a live handle from `cbt_sample_new`.
 */
size_t cbt_sample_len(const CbtSample *sample);

/*
 Release a sample handle. Null is accepted and ignored.

 # Safety
 `sample` must be null or a live handle, and must not be used afterwards.
 */
void cbt_sample_free(CbtSample *sample);

/*
 Tuning plan for sample size `n`: `k = floor(n^alpha)` tail observations
 and resolution `m = floor(n^beta)`, after checking the exponent
 feasibility inequalities for second-order rate `rho`. Finite-sample
 warnings are reported in `out_warnings` as a bitmask of the `CBT_WARN_*`
 constants; pass null to ignore them.

 # Safety
 `out_k` and `out_m` must be valid destinations; `out_warnings` must be
 null or valid.
 */
CbtStatus cbt_plan(size_t n,
                   double alpha,
                   double beta,
                   double rho,
                   size_t *out_k,
                   size_t *out_m,
                   uint32_t *out_warnings);

/*
 Tail copula estimate at `(x, y)` with `x, y >= 0`; rescaled arguments
 beyond the unit square are clamped back to 1 (`out_clamped` reports
 whether that happened; pass null to ignore it).

 # Safety
 `sample` must be a live handle; `out_value` must be a valid destination;
 `out_clamped` must be null or valid.
 */
CbtStatus cbt_tail_value(const CbtSample *sample,
                         size_t k_n,
                         size_t m,
                         CbtSide side,
                         CbtSmoothing smoothing,
                         double x,
                         double y,
                         double *out_value,
                         bool *out_clamped);

/*
 Tail dependence coefficient estimate: the tail copula at (1, 1).

 # Safety
 Same contract as `cbt_tail_value`.
 */
CbtStatus cbt_lambda(const CbtSample *sample,
                     size_t k_n,
                     size_t m,
                     CbtSide side,
                     CbtSmoothing smoothing,
                     double *out_value);

/*
 Multiplier-bootstrap confidence interval for the tail dependence
 coefficient, from `b` standard-exponential reweightings of the sample
 driven deterministically by `seed`. Writes the checkerboard point
 estimate and the `level` two-sided interval clamped to [0, 1]. Any
 out-pointer may be null to skip that output, except that at least the
 pair (`out_lo`, `out_hi`) is required.

 # Safety
 `sample` must be a live handle; non-null out-pointers must be valid.
 */
CbtStatus cbt_bootstrap_ci(const CbtSample *sample,
                           size_t k_n,
                           size_t m,
                           CbtSide side,
                           size_t b,
                           uint64_t seed,
                           double level,
                           double *out_center,
                           double *out_lo,
                           double *out_hi);

/*
 Run the built-in verification suite. Returns the number of failed checks
 (0 means everything passed) or -1 if the suite itself panicked; the
 failure report is then available via `cbt_last_error`.
 */
int cbt_selftest(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CBTAIL_H */
