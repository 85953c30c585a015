#ifndef REPWITNESS_H
#define REPWITNESS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum RwStatus {
  /**
   * Success; hypotheses hold where applicable.
   */
  RwOk = 0,
  /**
   * Negative result: hypothesis fails (`check`) or budget exhausted (`solve`).
   */
  RwNegative = 1,
  /**
   * Input text failed to parse.
   */
  RwParseError = 2,
  /**
   * A pointer argument was null or a C string was not valid UTF-8.
   */
  RwInvalidArgument = 3,
  /**
   * Precondition violated: `solve` on a presentation whose hypothesis fails.
   */
  RwPrecondition = 4,
} RwStatus;

/**
 * Opaque parsed presentation (generators, relators, loops, targets).
 */
typedef struct RwPresentation RwPresentation;

/**
 * Parses presentation-file text (the CLI's line format, or JSON when
 * `as_json` is nonzero) into a handle. On success writes the handle to
 * `out` and returns `RwOk`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. The handle must be released with [`rw_presentation_free`].
 */
enum RwStatus rw_presentation_parse(const char *text, int32_t as_json, struct RwPresentation **out);

/**
 * Releases a handle from [`rw_presentation_parse`]. Null is a no-op.
 *
 * # Safety
 * `handle` must be null or a pointer previously returned by
 * [`rw_presentation_parse`] that has not been freed.
 */
void rw_presentation_free(struct RwPresentation *handle);

/**
 * Releases a string returned through any `out_json` parameter.
 *
 * # Safety
 * `s` must be null or a string pointer produced by this library.
 */
void rw_string_free(char *s);

/**
 * Homology profile plus σ and μ when `b₂ = 1`, as JSON.
 *
 * # Safety
 * `handle` must be a live handle; `out_json` a valid pointer.
 */
enum RwStatus rw_analyze(const struct RwPresentation *handle, char **out_json);

/**
 * Decides the hypotheses of theorem 1 or 2 for the handle's presentation
 * and loops. Returns `RwOk` when they hold, `RwNegative` when they fail;
 * the JSON report carries the reason and prediction either way.
 *
 * # Safety
 * `handle` must be a live handle; `out_json` a valid pointer.
 */
enum RwStatus rw_check(const struct RwPresentation *handle, uint8_t theorem, char **out_json);

/**
 * Runs a theorem's witness pipeline with the given seed and restart
 * budget (`0` for the defaults stored in the file, then the library
 * default). On success the JSON report includes the witness.
 *
 * # Safety
 * `handle` must be a live handle; `out_json` a valid pointer.
 */
enum RwStatus rw_solve(const struct RwPresentation *handle,
                       uint8_t theorem,
                       uint64_t seed,
                       uintptr_t budget,
                       char **out_json);

#endif  /* REPWITNESS_H */
