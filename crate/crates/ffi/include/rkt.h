#ifndef RKT_H
#define RKT_H

/* Generated by cbindgen from rkt-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum RktStatus {
  RKT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  RKT_STATUS_NULL_POINTER = 1,
  /**
   * An input string was not valid UTF-8.
   */
  RKT_STATUS_INVALID_UTF8 = 2,
  /**
   * The instance document could not be parsed.
   */
  RKT_STATUS_PARSE_ERROR = 3,
  /**
   * Invalid format, player index, or other domain error.
   */
  RKT_STATUS_INVALID_INPUT = 4,
  /**
   * A size guard would be exceeded; pass `force` or use estimation.
   */
  RKT_STATUS_GUARD_EXCEEDED = 5,
  /**
   * An internal invariant failed.
   */
  RKT_STATUS_INTERNAL_ERROR = 6,
} RktStatus;

/**
 * Opaque handle: a validated tournament format.
 */
typedef struct RktFormat RktFormat;

/**
 * Opaque handle: a parsed, canonically sorted instance.
 */
typedef struct RktInstance RktInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *rkt_version(void);

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; do not free.
 */
const char *rkt_last_error_message(void);

/**
 * Release a string returned through an `out` parameter.
 *
 * # Safety
 * `s` must have been produced by this library and not freed before.
 */
void rkt_string_free(char *s);

/**
 * Parse a JSON instance document `{"values": ["6", "1/100", ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum RktStatus rkt_instance_from_json(const char *json, struct RktInstance **out);

/**
 * Number of players, or 0 for a null handle.
 *
 * # Safety
 * `instance` must be null or a live handle.
 */
uint32_t rkt_instance_player_count(const struct RktInstance *instance);

/**
 * # Safety
 * `instance` must come from [`rkt_instance_from_json`], freed once.
 */
void rkt_instance_free(struct RktInstance *instance);

/**
 * Build a format for `n` players from `"balanced"`, `"sequential"`, or
 * comma-separated match counts like `"2,2,1"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be valid.
 */
enum RktStatus rkt_format_parse(uint32_t n, const char *spec, struct RktFormat **out);

/**
 * Number of rounds, or 0 for a null handle.
 *
 * # Safety
 * `format` must be null or a live handle.
 */
uint32_t rkt_format_round_count(const struct RktFormat *format);

/**
 * Render the match counts as `"2,2,1"`; free with [`rkt_string_free`].
 *
 * # Safety
 * `format` must be a live handle; `out` must be valid.
 */
enum RktStatus rkt_format_to_string(const struct RktFormat *format, char **out);

/**
 * # Safety
 * `format` must come from [`rkt_format_parse`], freed once.
 */
void rkt_format_free(struct RktFormat *format);

/**
 * Exact win probabilities as doubles, written to `out_probs` in the
 * caller's input order. `len` must equal the player count.
 *
 * # Safety
 * `out_probs` must point to `len` writable doubles; the handles must be
 * live.
 */
enum RktStatus rkt_win_probabilities(const struct RktInstance *instance,
                                     const struct RktFormat *format,
                                     bool force,
                                     double *out_probs,
                                     size_t len);

/**
 * Exact analysis as a JSON report (same schema as the CLI); set
 * `include_reach` for per-round reach probabilities.
 *
 * # Safety
 * Handles must be live; `out_json` must be valid. Free the string with
 * [`rkt_string_free`].
 */
enum RktStatus rkt_analyze_json(const struct RktInstance *instance,
                                const struct RktFormat *format,
                                bool include_reach,
                                bool force,
                                char **out_json);

/**
 * Analytic bounds as a JSON report.
 *
 * # Safety
 * As [`rkt_analyze_json`].
 */
enum RktStatus rkt_bounds_json(const struct RktInstance *instance,
                               const struct RktFormat *format,
                               char **out_json);

/**
 * Seeded Monte Carlo estimate as a JSON report. Identical arguments
 * produce byte-identical reports.
 *
 * # Safety
 * As [`rkt_analyze_json`].
 */
enum RktStatus rkt_estimate_json(const struct RktInstance *instance,
                                 const struct RktFormat *format,
                                 uint64_t trials,
                                 uint64_t seed,
                                 char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RKT_H */
