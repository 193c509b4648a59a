#ifndef CRAM_H
#define CRAM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CramStatus {
  CRAM_STATUS_OK = 0,
  CRAM_STATUS_NULL_POINTER = 1,
  CRAM_STATUS_INVALID_ARGUMENT = 2,
  CRAM_STATUS_PARSE = 3,
  /**
   * The budget ran out before an answer was reached.
   */
  CRAM_STATUS_UNDECIDED = 4,
  CRAM_STATUS_IO = 5,
  CRAM_STATUS_TOO_LARGE = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  CRAM_STATUS_PANIC = 7,
} CramStatus;

/**
 * A coloring of the pairs of `[n]` with colors `1..=k`.
 */
typedef struct CramColoring CramColoring;

/**
 * Bound engine: Ramsey table plus certificates.
 */
typedef struct CramEngine CramEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the next call.
 */
const char *cram_last_error(void);

/**
 * Library version, static storage.
 */
const char *cram_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or came from this library and was not freed before.
 */
void cram_string_free(char *s);

/**
 * Engine with the built-in Ramsey values and certificates.
 *
 * # Safety
 * `out` is a valid pointer.
 */
enum CramStatus cram_engine_new(struct CramEngine **out);

/**
 * Replaces the engine's Ramsey table with the defaults merged with a JSON file.
 *
 * # Safety
 * `engine` is a live handle; `path` is a NUL-terminated string.
 */
enum CramStatus cram_engine_load_ramsey_table(struct CramEngine *engine, const char *path);

/**
 * # Safety
 * `engine` is null or a live handle, freed at most once.
 */
void cram_engine_free(struct CramEngine *engine);

/**
 * Interval `[lo, hi]` for `R̄(m_1, ..., m_k)`; `hi = 0` means no upper bound.
 *
 * # Safety
 * `m` points to `k` values; `lo` and `hi` are valid pointers.
 */
enum CramStatus cram_bound(const struct CramEngine *engine,
                           const uint32_t *m,
                           size_t k,
                           uint32_t *lo,
                           uint32_t *hi);

/**
 * The bound with its provenance as JSON; free with `cram_string_free`.
 *
 * # Safety
 * As [`cram_bound`]; `out` is a valid pointer.
 */
enum CramStatus cram_bound_json(const struct CramEngine *engine,
                                const uint32_t *m,
                                size_t k,
                                char **out);

/**
 * Exact value by search. On `CRAM_STATUS_UNDECIDED`, `lo`/`hi` hold the narrowed
 * interval (`hi = 0`: unbounded) and `value` is 0. `budget_ms = 0` means no limit.
 *
 * # Safety
 * `engine` is a live handle; `m` points to `k` values; outputs are valid pointers.
 */
enum CramStatus cram_exact_value(struct CramEngine *engine,
                                 const uint32_t *m,
                                 size_t k,
                                 uint64_t budget_ms,
                                 uint32_t *value,
                                 uint32_t *lo,
                                 uint32_t *hi);

/**
 * Whether `K_n` has a coloring with `alpha_i < m_i` for every color. On yes,
 * `*witness` receives a new coloring handle (when `witness` is not null).
 *
 * # Safety
 * `m` points to `k` values; `exists` is valid; `witness` is null or valid.
 */
enum CramStatus cram_exists_good_coloring(size_t n,
                                          const uint32_t *m,
                                          size_t k,
                                          uint64_t budget_ms,
                                          bool *exists,
                                          struct CramColoring **witness);

/**
 * Parses `{"n":..,"k":..,"edges":[{"u":..,"v":..,"c":..},..]}`.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is valid.
 */
enum CramStatus cram_coloring_from_json(const char *json, struct CramColoring **out);

/**
 * A copy of a built-in witness coloring (`"W1"` ... `"W4"`).
 *
 * # Safety
 * `id` is a NUL-terminated string; `out` is valid.
 */
enum CramStatus cram_coloring_builtin(const char *id, struct CramColoring **out);

/**
 * # Safety
 * `c` is null or a live handle, freed at most once.
 */
void cram_coloring_free(struct CramColoring *c);

/**
 * Order and color count.
 *
 * # Safety
 * `c` is a live handle; `n` and `k` are valid.
 */
enum CramStatus cram_coloring_shape(const struct CramColoring *c, size_t *n, size_t *k);

/**
 * Color (1-based) of the pair `{u, v}` (1-based vertices).
 *
 * # Safety
 * `c` is a live handle; `color` is valid.
 */
enum CramStatus cram_coloring_color(const struct CramColoring *c,
                                    size_t u,
                                    size_t v,
                                    size_t *color);

/**
 * Independence number of each color class, written to `alpha[0..k]`.
 *
 * # Safety
 * `c` is a live handle; `alpha` has room for `len` values.
 */
enum CramStatus cram_coloring_alpha(const struct CramColoring *c, size_t *alpha, size_t len);

/**
 * The coloring as JSON; free with `cram_string_free`.
 *
 * # Safety
 * `c` is a live handle; `out` is valid.
 */
enum CramStatus cram_coloring_to_json(const struct CramColoring *c, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRAM_H */
