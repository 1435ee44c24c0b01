#ifndef OSCILLOMETER_H
#define OSCILLOMETER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; 2 and 3 agree with the command-line exit codes.
 */
typedef enum OscStatus {
  OSC_STATUS_OK = 0,
  OSC_STATUS_NULL_POINTER = 1,
  OSC_STATUS_INVALID_CONFIG = 2,
  OSC_STATUS_NUMERICAL = 3,
  OSC_STATUS_CHECK_FAILED = 4,
  OSC_STATUS_UTF8 = 5,
  OSC_STATUS_PANIC = 6,
} OscStatus;

/**
 * A function in any of the library's representations.
 */
typedef struct OscFunction OscFunction;

/**
 * A validated space descriptor.
 */
typedef struct OscSpace OscSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * NUL-terminated message of the last failed call on this thread, or null.
 * Valid until the next call into this library on the same thread.
 */
const char *osc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *osc_version(void);

/**
 * Parse a space descriptor such as `{"space": "bloch"}`.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is writable.
 */
enum OscStatus osc_space_from_json(const char *json, struct OscSpace **out);

/**
 * # Safety
 * `space` is null or came from [`osc_space_from_json`] and is not used again.
 */
void osc_space_free(struct OscSpace *space);

/**
 * Build a function from the JSON function spec used by the command line
 * (`builtin`, `taylor` or `samples`); `file` paths resolve against the
 * working directory. Builtin sizes follow `space`.
 *
 * # Safety
 * `space` is a live handle, `json` a NUL-terminated string, `out` writable.
 */
enum OscStatus osc_function_from_json(const struct OscSpace *space,
                                      const char *json,
                                      struct OscFunction **out);

/**
 * Equispaced circle samples `f(2πj/len)`; `im` may be null.
 *
 * # Safety
 * `re` (and `im` unless null) hold `len` doubles; `out` is writable.
 */
enum OscStatus osc_function_from_circle_samples(const double *re,
                                                const double *im,
                                                size_t len,
                                                struct OscFunction **out);

/**
 * The polynomial `Σ c_k z^k`, `k < len`; `im` may be null.
 *
 * # Safety
 * `re` (and `im` unless null) hold `len` doubles; `out` is writable.
 */
enum OscStatus osc_function_from_taylor(const double *re,
                                        const double *im,
                                        size_t len,
                                        struct OscFunction **out);

/**
 * # Safety
 * `f` is null or came from an `osc_function_*` constructor and is not used
 * again.
 */
void osc_function_free(struct OscFunction *f);

/**
 * Grid seminorm `sup ‖Lf‖` on the space's default family.
 *
 * # Safety
 * Handles are live; `out` is writable.
 */
enum OscStatus osc_seminorm(const struct OscSpace *space, const struct OscFunction *f, double *out);

/**
 * Tail estimate of the distance to the little space, with its uncertainty.
 *
 * # Safety
 * Handles are live; `estimate` is writable; `uncertainty` is null or
 * writable.
 */
enum OscStatus osc_distance(const struct OscSpace *space,
                            const struct OscFunction *f,
                            double *estimate,
                            double *uncertainty);

/**
 * Full distance report as JSON. `family_json` is null or an approximant
 * family such as `{"kind": "dilation", "ladder": {"type": "dyadic_r",
 * "levels": 8}}`; a non-positive `slack` selects the default. Returns
 * `CHECK_FAILED`, still filling `out_json`, when the lower-bound check fails.
 * Release `out_json` with [`osc_string_free`].
 *
 * # Safety
 * Handles are live; `family_json` is null or NUL-terminated; `out_json` is
 * writable.
 */
enum OscStatus osc_distance_report_json(const struct OscSpace *space,
                                        const struct OscFunction *f,
                                        const char *family_json,
                                        double slack,
                                        char **out_json);

/**
 * Approximation-assumption report as JSON for the family in `family_json`.
 * Returns `CHECK_FAILED`, still filling `out_json`, when the verdict is a
 * failure. Release `out_json` with [`osc_string_free`].
 *
 * # Safety
 * Handles are live; `family_json` is NUL-terminated; `out_json` is writable.
 */
enum OscStatus osc_assumption_check_json(const struct OscSpace *space,
                                         const struct OscFunction *f,
                                         const char *family_json,
                                         double slack,
                                         char **out_json);

/**
 * # Safety
 * `s` is null or a string returned by this library, not freed before.
 */
void osc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSCILLOMETER_H */
