#ifndef QGAUSS_H
#define QGAUSS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QgStatus {
  QG_STATUS_OK = 0,
  QG_STATUS_NULL_POINTER = -1,
  QG_STATUS_INVALID_UTF8 = -2,
  /**
   * Malformed JSON, spec shape, expression or pattern.
   */
  QG_STATUS_PARSE = -3,
  /**
   * Input rejected by a validity check.
   */
  QG_STATUS_VALIDATION = -4,
  /**
   * Evaluation failed (foreign letter, guard limit, ...).
   */
  QG_STATUS_EVAL = -5,
  QG_STATUS_PANIC = -6,
  /**
   * Caller buffer shorter than the result.
   */
  QG_STATUS_BUFFER_TOO_SMALL = -7,
} QgStatus;

/**
 * Opaque cooked functional.
 */
typedef struct QgFunctional QgFunctional;

/**
 * Opaque Gaussian spec.
 */
typedef struct QgSpec QgSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a spec from JSON (the same format as the `--spec` CLI flag).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_spec` must be writable.
 */
enum QgStatus qg_spec_from_json(const char *json, struct QgSpec **out_spec);

/**
 * Releases a spec. Null is ignored.
 *
 * # Safety
 * `spec` must come from this library and not be used afterwards.
 */
void qg_spec_free(struct QgSpec *spec);

/**
 * Runs the validity checks and writes the JSON report to `out_json`.
 * `out_passed` receives whether every check passed; the status is `Ok`
 * either way.
 *
 * # Safety
 * Pointers must be valid; `out_json` must be released with `qg_string_free`.
 */
enum QgStatus qg_spec_validate_json(const struct QgSpec *spec,
                                    double tol,
                                    char **out_json,
                                    bool *out_passed);

/**
 * Validates and cooks a spec into an evaluable functional.
 *
 * # Safety
 * `spec` must be a live handle; `out_functional` must be writable.
 */
enum QgStatus qg_functional_cook(const struct QgSpec *spec,
                                 double tol,
                                 struct QgFunctional **out_functional);

/**
 * Releases a functional. Null is ignored.
 *
 * # Safety
 * `f` must come from this library and not be used afterwards.
 */
void qg_functional_free(struct QgFunctional *f);

/**
 * Dimension of the cocycle range (number of Kraus generators).
 *
 * # Safety
 * Pointers must be valid.
 */
enum QgStatus qg_functional_dim(const struct QgFunctional *f, size_t *out_dim);

/**
 * `φ(expr)`.
 *
 * # Safety
 * Pointers must be valid; `expr` NUL-terminated.
 */
enum QgStatus qg_eval_phi(const struct QgFunctional *f,
                          const char *expr,
                          double *out_re,
                          double *out_im);

/**
 * `η(expr)` as interleaved `re, im` pairs. `out_len` always receives the
 * required number of doubles (`2 * dim`); if `buf_len` is smaller the call
 * returns `BufferTooSmall` and writes nothing to `buf`.
 *
 * # Safety
 * `buf` must hold `buf_len` doubles (may be null when `buf_len` is 0).
 */
enum QgStatus qg_eval_eta(const struct QgFunctional *f,
                          const char *expr,
                          double *buf,
                          size_t buf_len,
                          size_t *out_len);

/**
 * `φ(ab) − ε(a)φ(b) − φ(a)ε(b)`.
 *
 * # Safety
 * Pointers must be valid; expressions NUL-terminated.
 */
enum QgStatus qg_coboundary(const struct QgFunctional *f,
                            const char *a,
                            const char *b,
                            double *out_re,
                            double *out_im);

/**
 * The `(W, H)` form of a spec as JSON.
 *
 * # Safety
 * Pointers must be valid; `out_json` must be released with `qg_string_free`.
 */
enum QgStatus qg_spec_to_wh_json(const struct QgSpec *spec, char **out_json);

/**
 * Rebuilds a spec from `(W, H)` JSON, extracting Kraus generators.
 *
 * # Safety
 * `json` NUL-terminated; `out_spec` writable.
 */
enum QgStatus qg_spec_from_wh_json(const char *json, double tol, struct QgSpec **out_spec);

/**
 * Character moment `φ(χ_pattern)` by direct summation. `pattern` uses the
 * CLI notation, e.g. `"uu*u"`.
 *
 * # Safety
 * Pointers must be valid; `pattern` NUL-terminated.
 */
enum QgStatus qg_character_moment(const struct QgFunctional *f,
                                  const char *pattern,
                                  double *out_re,
                                  double *out_im);

/**
 * Convolution-centrality test up to word length `cutoff`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QgStatus qg_central_check(const struct QgFunctional *f,
                               size_t cutoff,
                               double tol,
                               bool *out_central);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void qg_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *qg_last_error_message(void);

/**
 * Library version, statically allocated.
 */
const char *qg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QGAUSS_H */
