#ifndef STEERAGE_H
#define STEERAGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SteerageStatus {
  STEERAGE_STATUS_OK = 0,
  STEERAGE_STATUS_NULL_POINTER = 1,
  STEERAGE_STATUS_INVALID_ARGUMENT = 2,
  STEERAGE_STATUS_INVALID_STATE = 3,
  STEERAGE_STATUS_DOMAIN = 4,
  STEERAGE_STATUS_UNSUPPORTED = 5,
  STEERAGE_STATUS_NUMERIC = 6,
  STEERAGE_STATUS_PANIC = 7,
} SteerageStatus;

typedef enum SteerageDirection {
  STEERAGE_DIRECTION_ALICE_TO_BOB = 0,
  STEERAGE_DIRECTION_BOB_TO_ALICE = 1,
} SteerageDirection;

typedef enum SteerageOutcome {
  STEERAGE_OUTCOME_PLUS = 0,
  STEERAGE_OUTCOME_MINUS = 1,
} SteerageOutcome;

/**
 * Opaque two-qubit state.
 */
typedef struct SteerageState SteerageState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON state description such as `{"werner": {"p": 0.5}}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SteerageStatus steerage_state_from_json(const char *json, struct SteerageState **out);

/**
 * Builds a state from `a`, `b` (3 entries each) and `T` (9 entries, row-major).
 *
 * # Safety
 * The input arrays must hold at least 3, 3 and 9 doubles; `out` must be valid.
 */
enum SteerageStatus steerage_state_from_g(const double *a,
                                          const double *b,
                                          const double *t,
                                          struct SteerageState **out);

/**
 * Releases a state. Null is ignored.
 *
 * # Safety
 * `state` must come from this library and not be used afterwards.
 */
void steerage_state_free(struct SteerageState *state);

/**
 * Minimum eigenvalue of the density matrix and whether the state is physical.
 *
 * # Safety
 * All pointers must be valid.
 */
enum SteerageStatus steerage_state_validate(const struct SteerageState *state,
                                            double *min_eigenvalue,
                                            bool *valid);

/**
 * Steering quantity of the state's basic figure. `grid_level` 0 is the default grid.
 *
 * # Safety
 * All pointers must be valid.
 */
enum SteerageStatus steerage_quantity(const struct SteerageState *state,
                                      enum SteerageDirection direction,
                                      int32_t grid_level,
                                      double *value,
                                      uint32_t *dimension,
                                      double *est_error);

/**
 * Center (3), semi-axes (3, descending), axes (9, row-major with axes as columns) and
 * dimension of the steering figure.
 *
 * # Safety
 * Output arrays must hold 3, 3 and 9 doubles.
 */
enum SteerageStatus steerage_ellipsoid(const struct SteerageState *state,
                                       enum SteerageDirection direction,
                                       double *center,
                                       double *semi_axes,
                                       double *axes,
                                       uint32_t *dimension);

/**
 * Outcome probability and unnormalised Bloch vector after Alice measures along unit `x`.
 *
 * # Safety
 * `x` must hold 3 doubles, `shrinked` room for 3.
 */
enum SteerageStatus steerage_conditioned_state(const struct SteerageState *state,
                                               const double *x,
                                               enum SteerageOutcome outcome,
                                               double *prob,
                                               double *shrinked);

/**
 * The `analyze` report as JSON. Free the string with [`steerage_string_free`].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SteerageStatus steerage_analyze_json(const struct SteerageState *state,
                                          int32_t grid_level,
                                          char **out);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void steerage_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. Valid until the next call.
 */
const char *steerage_last_error_message(void);

/**
 * Complete elliptic integral of the second kind, `m ∈ [0, 1]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SteerageStatus steerage_elliptic_e(double m, double *out);

/**
 * Library version, static storage.
 */
const char *steerage_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STEERAGE_H */
