/* SPDX-License-Identifier: MIT OR Apache-2.0 */
/* Generated by cbindgen; do not edit. */

#ifndef WEMGSC_H
#define WEMGSC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Values 2 and 3 match the command line exit codes.
typedef enum WemgscStatus {
  WEMGSC_STATUS_OK = 0,
  WEMGSC_STATUS_NULL_POINTER = 1,
  WEMGSC_STATUS_INVALID_INPUT = 2,
  WEMGSC_STATUS_CONSTRAINT = 3,
  WEMGSC_STATUS_BUFFER_TOO_SMALL = 4,
  WEMGSC_STATUS_PANIC = 5,
} WemgscStatus;

typedef enum WemgscGapMethod {
  WEMGSC_GAP_METHOD_LD = 0,
  WEMGSC_GAP_METHOD_DC = 1,
} WemgscGapMethod;

typedef enum WemgscEstimation {
  WEMGSC_ESTIMATION_GLOBAL = 0,
  WEMGSC_ESTIMATION_SEGMENTWISE = 1,
} WemgscEstimation;

// Detector settings; unset values take length-dependent defaults.
typedef struct WemgscConfig WemgscConfig;

// Outcome of one detection run.
typedef struct WemgscResult WemgscResult;

// One simulated series.
typedef struct WemgscSimulation WemgscSimulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *wemgsc_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *wemgsc_version(void);

// New configuration with all values at their defaults.
struct WemgscConfig *wemgsc_config_new(void);

// # Safety
// `cfg` must be null or a pointer from `wemgsc_config_new` not yet freed.
void wemgsc_config_free(struct WemgscConfig *cfg);

// Intervals per recursion of the path search.
//
// # Safety
// `cfg` must be a live configuration handle.
enum WemgscStatus wemgsc_config_set_intervals(struct WemgscConfig *cfg, size_t value);

// Maximum number of path entries used to build models.
//
// # Safety
// `cfg` must be a live configuration handle.
enum WemgscStatus wemgsc_config_set_max_candidates(struct WemgscConfig *cfg, size_t value);

// # Safety
// `cfg` must be a live configuration handle.
enum WemgscStatus wemgsc_config_set_max_models(struct WemgscConfig *cfg, size_t value);

// # Safety
// `cfg` must be a live configuration handle.
enum WemgscStatus wemgsc_config_set_max_ar_order(struct WemgscConfig *cfg, size_t value);

// # Safety
// `cfg` must be a live configuration handle.
enum WemgscStatus wemgsc_config_set_min_spacing(struct WemgscConfig *cfg, size_t value);

// Penalty `log(n)^exponent`.
//
// # Safety
// `cfg` must be a live configuration handle.
enum WemgscStatus wemgsc_config_set_penalty_exponent(struct WemgscConfig *cfg, double value);

// Gap rule, one of the `WemgscGapMethod` values.
//
// # Safety
// `cfg` must be a live configuration handle.
enum WemgscStatus wemgsc_config_set_gap_method(struct WemgscConfig *cfg, int32_t value);

// Estimator, one of the `WemgscEstimation` values.
//
// # Safety
// `cfg` must be a live configuration handle.
enum WemgscStatus wemgsc_config_set_estimation(struct WemgscConfig *cfg, int32_t value);

// # Safety
// `cfg` must be a live configuration handle.
enum WemgscStatus wemgsc_config_set_refine(struct WemgscConfig *cfg, bool value);

// Runs detection on `x[0..n]`. `cfg` may be null for defaults. On success
// `*out` receives a result handle to be released with `wemgsc_result_free`.
//
// # Safety
// `x` must point to `n` readable doubles; `cfg` must be null or live; `out`
// must be writable.
enum WemgscStatus wemgsc_detect(const double *x,
                                size_t n,
                                const struct WemgscConfig *cfg,
                                struct WemgscResult **out);

// # Safety
// `res` must be null or a live result handle.
void wemgsc_result_free(struct WemgscResult *res);

// Number of reported change points (refined when refinement is on); 0 for
// a null handle.
//
// # Safety
// `res` must be null or a live result handle.
size_t wemgsc_result_num_changepoints(const struct WemgscResult *res);

// Copies the reported change points (1-based index of the last observation
// before each change) into `buf`.
//
// # Safety
// `res` must be live and `buf` writable for `len` elements.
enum WemgscStatus wemgsc_result_changepoints(const struct WemgscResult *res,
                                             size_t *buf,
                                             size_t len);

// Change points selected before refinement; same count as the refined ones.
//
// # Safety
// `res` must be live and `buf` writable for `len` elements.
enum WemgscStatus wemgsc_result_selected(const struct WemgscResult *res, size_t *buf, size_t len);

// Selected AR order; 0 for a null handle.
//
// # Safety
// `res` must be null or a live result handle.
size_t wemgsc_result_ar_order(const struct WemgscResult *res);

// Copies the `ar_order` AR coefficients.
//
// # Safety
// `res` must be live and `buf` writable for `len` elements.
enum WemgscStatus wemgsc_result_ar_coefficients(const struct WemgscResult *res,
                                                double *buf,
                                                size_t len);

// Copies the `num_changepoints + 1` segment intercepts.
//
// # Safety
// `res` must be live and `buf` writable for `len` elements.
enum WemgscStatus wemgsc_result_levels(const struct WemgscResult *res, double *buf, size_t len);

// Full result as JSON, in the command line layout. Release with
// `wemgsc_string_free`.
//
// # Safety
// `res` must be live; `out` must be writable.
enum WemgscStatus wemgsc_result_to_json(const struct WemgscResult *res, char **out);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void wemgsc_string_free(char *s);

// Simulates model `model` ("M1" to "M13"). `n = 0` uses the model's own
// length; `rep` selects the replication stream.
//
// # Safety
// `model` must be a NUL-terminated string; `out` must be writable.
enum WemgscStatus wemgsc_simulate(const char *model,
                                  uint64_t seed,
                                  uint64_t rep,
                                  bool null_variant,
                                  size_t n,
                                  struct WemgscSimulation **out);

// # Safety
// `sim` must be null or a live simulation handle.
void wemgsc_simulation_free(struct WemgscSimulation *sim);

// # Safety
// `sim` must be null or a live simulation handle.
size_t wemgsc_simulation_len(const struct WemgscSimulation *sim);

// # Safety
// `sim` must be live and `buf` writable for `len` elements.
enum WemgscStatus wemgsc_simulation_values(const struct WemgscSimulation *sim,
                                           double *buf,
                                           size_t len);

// # Safety
// `sim` must be null or a live simulation handle.
size_t wemgsc_simulation_num_changepoints(const struct WemgscSimulation *sim);

// True change points of the simulation.
//
// # Safety
// `sim` must be live and `buf` writable for `len` elements.
enum WemgscStatus wemgsc_simulation_changepoints(const struct WemgscSimulation *sim,
                                                 size_t *buf,
                                                 size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEMGSC_H */
