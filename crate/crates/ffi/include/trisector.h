#ifndef TRISECTOR_H
#define TRISECTOR_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TrisectorStatus {
  TRISECTOR_STATUS_OK = 0,
  TRISECTOR_STATUS_NULL_POINTER = 1,
  TRISECTOR_STATUS_INVALID_ARGUMENT = 2,
  TRISECTOR_STATUS_OUT_OF_RANGE = 3,
  TRISECTOR_STATUS_SOLVER = 4,
  TRISECTOR_STATUS_GEOMETRY = 5,
  TRISECTOR_STATUS_ANALYSIS = 6,
  TRISECTOR_STATUS_IO = 7,
  TRISECTOR_STATUS_PANIC = 8,
} TrisectorStatus;

typedef enum TrisectorBranch {
  TRISECTOR_BRANCH_TRISECTOR = 0,
  TRISECTOR_BRANCH_CONJUGATE = 1,
} TrisectorBranch;

typedef enum TrisectorCoefficient {
  // Coefficients of `y = f(x)`.
  TRISECTOR_COEFFICIENT_M = 0,
  // Coefficients of the reparametrization `t(x)`.
  TRISECTOR_COEFFICIENT_LAMBDA = 1,
} TrisectorCoefficient;

// Sampled curve after a number of envelope iterations.
typedef struct TrisectorCurve TrisectorCurve;

// Exact branch solution.
typedef struct TrisectorSeries TrisectorSeries;

// Position and unit tangent at parameter `t`.
typedef struct TrisectorSample {
  double t;
  double x;
  double y;
  double ux;
  double uy;
} TrisectorSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next call into this library on the same thread.
const char *trisector_last_error(void);

// Library version as a static string.
const char *trisector_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void trisector_string_free(char *s);

// Solves `branch` exactly through even `order`.
//
// # Safety
// `out_series` must be a valid pointer.
enum TrisectorStatus trisector_series_solve(enum TrisectorBranch branch_kind,
                                            size_t order,
                                            struct TrisectorSeries **out_series);

// # Safety
// `series` must come from [`trisector_series_solve`] and not have been
// freed. Null is ignored.
void trisector_series_free(struct TrisectorSeries *series);

// # Safety
// `series` must be a live handle; `out_order` a valid pointer.
enum TrisectorStatus trisector_series_order(const struct TrisectorSeries *series,
                                            size_t *out_order);

// Float value of coefficient `index` (`0..=order`).
//
// # Safety
// `series` must be a live handle; `out_value` a valid pointer.
enum TrisectorStatus trisector_series_coefficient(const struct TrisectorSeries *series,
                                                  enum TrisectorCoefficient which,
                                                  size_t index,
                                                  double *out_value);

// Exact coefficient as `p/q+r/s*sqrt3`. Release with
// [`trisector_string_free`].
//
// # Safety
// `series` must be a live handle; `out_string` a valid pointer.
enum TrisectorStatus trisector_series_coefficient_string(const struct TrisectorSeries *series,
                                                         enum TrisectorCoefficient which,
                                                         size_t index,
                                                         char **out_string);

// Float value of the step-`k` determinant (`k` even, `2 ≤ k ≤ order`).
//
// # Safety
// `series` must be a live handle; `out_value` a valid pointer.
enum TrisectorStatus trisector_series_determinant(const struct TrisectorSeries *series,
                                                  size_t k,
                                                  double *out_value);

// Whether both residual series vanish exactly through the solved order.
//
// # Safety
// `series` must be a live handle; `out_vanish` a valid pointer.
enum TrisectorStatus trisector_series_residuals_vanish(const struct TrisectorSeries *series,
                                                       bool *out_vanish);

// Traces the parabola seed `y = 1/3 − t²` through `iterations`
// applications of the envelope map.
//
// # Safety
// `out_curve` must be a valid pointer.
enum TrisectorStatus trisector_curve_trace_parabola(double t_min,
                                                    double t_max,
                                                    size_t samples,
                                                    size_t iterations,
                                                    struct TrisectorCurve **out_curve);

// Traces the graph of a solved series as seed.
//
// # Safety
// `series` must be a live handle; `out_curve` a valid pointer.
enum TrisectorStatus trisector_curve_trace_series(const struct TrisectorSeries *series,
                                                  double t_min,
                                                  double t_max,
                                                  size_t samples,
                                                  size_t iterations,
                                                  struct TrisectorCurve **out_curve);

// # Safety
// `curve` must come from a trace function and not have been freed. Null is
// ignored.
void trisector_curve_free(struct TrisectorCurve *curve);

// # Safety
// `curve` must be a live handle; `out_len` a valid pointer.
enum TrisectorStatus trisector_curve_len(const struct TrisectorCurve *curve, size_t *out_len);

// # Safety
// `curve` must be a live handle; `out_sample` a valid pointer.
enum TrisectorStatus trisector_curve_sample(const struct TrisectorCurve *curve,
                                            size_t index,
                                            struct TrisectorSample *out_sample);

// Copies up to `capacity` samples into `buffer` and stores the number
// written in `out_written`.
//
// # Safety
// `buffer` must hold `capacity` samples; the other pointers must be valid.
enum TrisectorStatus trisector_curve_copy_samples(const struct TrisectorCurve *curve,
                                                  struct TrisectorSample *buffer,
                                                  size_t capacity,
                                                  size_t *out_written);

// Evaluates the curve at any parameter, independent of the samples.
//
// # Safety
// `curve` must be a live handle; `out_sample` a valid pointer.
enum TrisectorStatus trisector_curve_eval(const struct TrisectorCurve *curve,
                                          double t,
                                          struct TrisectorSample *out_sample);

// One application of the envelope map followed by reflection in the
// x-axis, at a single framed point.
//
// # Safety
// `out_sample` must be a valid pointer.
enum TrisectorStatus trisector_theta(struct TrisectorSample input,
                                     struct TrisectorSample *out_sample);

// Runs the verification suite with default settings. `only` is a comma
// separated list of criterion names or numbers, or null for all. The JSON
// report is stored in `out_json`; release it with
// [`trisector_string_free`].
//
// # Safety
// `only` must be null or a NUL-terminated string; the other pointers must
// be valid.
enum TrisectorStatus trisector_verify(const char *only, char **out_json, bool *out_all_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRISECTOR_H */
