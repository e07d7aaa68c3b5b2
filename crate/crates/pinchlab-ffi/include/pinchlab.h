/* C ABI for the pinchlab curvature-certification library. */

#ifndef PINCHLAB_H
#define PINCHLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum PinchStatus {
  // Success.
  PINCH_STATUS_OK = 0,
  // A required pointer argument was null.
  PINCH_STATUS_NULL_ARGUMENT = 1,
  // Input data was rejected (asymmetric coefficients, non-finite
  // values, wrong lengths, broken tensor symmetries, bad parameters).
  PINCH_STATUS_INVALID_INPUT = 2,
  // The operation does not support the given dimension or split.
  PINCH_STATUS_UNSUPPORTED_DIMENSION = 3,
  // Search or run configuration was invalid.
  PINCH_STATUS_BAD_CONFIG = 4,
  // A conditional certificate was invoked on data that does not
  // satisfy its hypothesis.
  PINCH_STATUS_HYPOTHESIS_NOT_MET = 5,
  // Unexpected internal failure (including caught panics).
  PINCH_STATUS_INTERNAL_ERROR = 6,
} PinchStatus;

// Opaque second-fundamental-form handle.
typedef struct PinchSff PinchSff;

// Pinching certificate for one data point.
typedef struct PinchStarResult {
  // Certified minimum sectional curvature.
  double k_min;
  // Mean curvature norm.
  double h;
  // Ambient curvature used.
  double c;
  // Dimension-dependent pinching threshold.
  double bound;
  // `k_min - bound`; nonnegative means the condition holds.
  double margin;
  // Search-minus-oracle dominance gap (nonnegative by construction).
  double search_gap;
} PinchStarResult;

// Spectra of the curvature operator on self-dual and anti-self-dual
// 2-forms, ascending within each block.
typedef struct PinchSpectrum {
  double mu_sd[3];
  double mu_asd[3];
  double min_eig;
} PinchSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string; do not free.
const char *pinch_version(void);

// Static human-readable name for a status code; do not free.
const char *pinch_status_name(enum PinchStatus status);

// Build a second fundamental form from `len = m * n * n` coefficients,
// indexed `a * n * n + i * n + j` (normal index first). Coefficients must
// be symmetric in `i, j` and finite. On success `*out` owns the handle;
// release it with [`pinch_sff_free`].
//
// # Safety
// `coeffs` must point to `len` readable doubles and `out` must be a valid
// writable pointer.
enum PinchStatus pinch_sff_new(size_t n,
                               size_t m,
                               const double *coeffs,
                               size_t len,
                               struct PinchSff **out);

// Umbilic data of a round sphere of radius `r`; see [`pinch_sff_new`] for
// ownership.
//
// # Safety
// `out` must be a valid writable pointer.
enum PinchStatus pinch_sff_round_sphere(size_t n, double r, struct PinchSff **out);

// Release a handle; null is tolerated.
//
// # Safety
// `sff` must have come from this library and not been freed before.
void pinch_sff_free(struct PinchSff *sff);

// Read back the dimensions of a handle.
//
// # Safety
// All pointers must be valid; `sff` must be a live handle.
enum PinchStatus pinch_sff_dims(const struct PinchSff *sff, size_t *out_n, size_t *out_m);

// The dimension-dependent pinching threshold `b(n, h, c)`.
//
// # Safety
// `out` must be a valid writable pointer.
enum PinchStatus pinch_pinching_bound(size_t n, double h, double c, double *out);

// Largest ellipsoid axis ratio that keeps the pinching condition; defined
// for `4 <= n <= 8`.
//
// # Safety
// `out` must be a valid writable pointer.
enum PinchStatus pinch_epsilon_bound(size_t n, double *out);

// Norm of the mean curvature vector.
//
// # Safety
// `sff` must be a live handle and `out` a valid writable pointer.
enum PinchStatus pinch_mean_curvature(const struct PinchSff *sff, double *out);

// Certify the pinching condition at one point in ambient curvature `c`.
// `restarts` controls the frame search effort (16-64 is typical).
//
// # Safety
// `sff` must be a live handle and `out` a valid writable pointer.
enum PinchStatus pinch_star_margin(const struct PinchSff *sff,
                                   double c,
                                   size_t restarts,
                                   uint64_t seed,
                                   struct PinchStarResult *out);

// Minimum isotropic curvature of the induced curvature tensor
// (four-dimensional data only).
//
// # Safety
// `sff` must be a live handle; `out_value` and `out_gap` must be valid
// writable pointers.
enum PinchStatus pinch_min_isotropic(const struct PinchSff *sff,
                                     double c,
                                     size_t restarts,
                                     uint64_t seed,
                                     double *out_value,
                                     double *out_gap);

// Self-dual/anti-self-dual spectra of the curvature operator
// (four-dimensional data only).
//
// # Safety
// `sff` must be a live handle and `out` a valid writable pointer.
enum PinchStatus pinch_bochner_spectrum(const struct PinchSff *sff,
                                        double c,
                                        struct PinchSpectrum *out);

// Run a packaged example end to end and hand back the JSON report as a
// heap string; release it with [`pinch_string_free`]. The status reports
// configuration problems only — a failed certificate still returns `Ok`
// with `overall_pass: false` inside the report.
//
// # Safety
// `example` must be a NUL-terminated string and `out_json` a valid
// writable pointer.
enum PinchStatus pinch_check_example(const char *example,
                                     uint64_t seed,
                                     size_t samples,
                                     char **out_json);

// Release a string returned by this library; null is tolerated.
//
// # Safety
// `s` must have come from this library and not been freed before.
void pinch_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PINCHLAB_H */
