#ifndef TVERBERG_H
#define TVERBERG_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes of every fallible call.
 */
typedef enum TvStatus {
  TV_STATUS_OK = 0,
  TV_STATUS_NULL_POINTER = 1,
  TV_STATUS_INVALID_UTF8 = 2,
  TV_STATUS_PARSE = 3,
  TV_STATUS_DIMENSION = 4,
  TV_STATUS_GENERICITY = 5,
  TV_STATUS_PRECONDITION = 6,
  TV_STATUS_SINGULAR = 7,
  TV_STATUS_INVARIANT = 8,
  TV_STATUS_IO = 9,
  TV_STATUS_PANIC = 10,
} TvStatus;

/**
 * Opaque handle to an ordered point sequence.
 */
typedef struct TvSequence TvSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on this thread.
 */
const char *tv_last_error(void);

/**
 * Library version as a static string.
 */
const char *tv_version(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void tv_string_free(char *s);

/**
 * Parse a sequence from CSV text (one point per line, `p/q` coordinates).
 *
 * # Safety
 * `csv` must be a valid C string and `out` a valid pointer.
 */
enum TvStatus tv_sequence_from_csv(const char *csv, struct TvSequence **out);

/**
 * Points `(t, ..., t^d)` for `t = 1..n`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TvStatus tv_sequence_moment_curve(size_t d, size_t n, struct TvSequence **out);

/**
 * The first `n` points of the stretched diagonal in `R^d`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TvStatus tv_sequence_stretched_diagonal(size_t d, size_t n, struct TvSequence **out);

/**
 * Release a sequence. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void tv_sequence_free(struct TvSequence *s);

/**
 * Number of points, or 0 for null.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t tv_sequence_len(const struct TvSequence *s);

/**
 * Dimension, or 0 for null.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t tv_sequence_dim(const struct TvSequence *s);

/**
 * Exact coordinates as CSV text.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum TvStatus tv_sequence_to_csv(const struct TvSequence *s, char **out);

/**
 * Whether no `d + 1` points have zero orientation.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum TvStatus tv_sequence_is_generic(const struct TvSequence *s, bool *out);

/**
 * Common orientation of all `(d+1)`-subsequences: 1 or -1, or 0 if the
 * sequence is not orientation-homogeneous.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum TvStatus tv_sequence_homogeneous_sign(const struct TvSequence *s, int32_t *out);

/**
 * Test one Tverberg type, given by its encoding such as `1231213`. On
 * success `holds` is set, and if `certificate_json` is not null it receives
 * the certificate as JSON, or null when the type does not hold.
 *
 * # Safety
 * `s` must be a live handle, `encoding` a valid C string, `holds` a valid
 * pointer and `certificate_json` null or valid.
 */
enum TvStatus tv_verify_type(const struct TvSequence *s,
                             const char *encoding,
                             bool *holds,
                             char **certificate_json);

/**
 * All Tverberg partitions into `r` parts as a JSON array of certificates;
 * `count` (if not null) receives their number.
 *
 * # Safety
 * `s` must be a live handle, `count` null or valid, `out_json` valid.
 */
enum TvStatus tv_tverberg_partitions(const struct TvSequence *s,
                                     size_t r,
                                     size_t *count,
                                     char **out_json);

/**
 * Evaluate a separation statement such as `25(1:X[14;36])`.
 *
 * # Safety
 * `s` must be a live handle, `statement` a valid C string and `out` valid.
 */
enum TvStatus tv_eval_statement(const struct TvSequence *s, const char *statement, bool *out);

/**
 * `(r-1)!^d`, the number of colorful types.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TvStatus tv_colorful_count(size_t d, size_t r, uint64_t *out);

/**
 * Colorful type encodings as a JSON array of strings, sorted.
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum TvStatus tv_colorful_types(size_t d, size_t r, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TVERBERG_H */
