#pragma once

/* Generated with cbindgen:0.29.4 */

/* This file is generated by cbindgen from extraspecial-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum ExspStatus {
  EXSP_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  EXSP_STATUS_NULL_POINTER = 1,
  /**
   * Unparseable input or parameters outside their documented range.
   */
  EXSP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A budget or prime limit was exhausted.
   */
  EXSP_STATUS_RESOURCE_LIMIT = 3,
  /**
   * The request is provably unsatisfiable (target cyclicity degree 0).
   */
  EXSP_STATUS_UNREACHABLE = 4,
  EXSP_STATUS_INTERNAL = 5,
} ExspStatus;

/**
 * Opaque handle to a realized group model.
 */
typedef struct ExspGroup ExspGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *exsp_last_error_message(void);

/**
 * Releases a string allocated by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned through one of the `char**`
 * out-parameters here, not yet freed; NULL is accepted and ignored.
 */
void exsp_string_free(char *s);

/**
 * Realizes the family member named by `spec` (grammar
 * `<kind>:p=<p>,n=<n>[,k=<k>]`) as an explicit group, subject to `budget`
 * (0 means the default of 100000 elements).
 *
 * # Safety
 * `spec` must point to a NUL-terminated string and `out` to a writable
 * `ExspGroup*` slot.
 */
enum ExspStatus exsp_group_build(const char *spec, uint64_t budget, struct ExspGroup **out);

/**
 * Releases a group handle.
 *
 * # Safety
 * `group` must come from [`exsp_group_build`] and not be freed twice; NULL
 * is accepted and ignored.
 */
void exsp_group_free(struct ExspGroup *group);

/**
 * Number of elements, or 0 for NULL.
 *
 * # Safety
 * `group` must be a live handle from [`exsp_group_build`] or NULL.
 */
uint64_t exsp_group_order(const struct ExspGroup *group);

/**
 * Human-readable construction label of the group.
 *
 * # Safety
 * `group` must be a live handle; `out` must be writable. Free the result
 * with [`exsp_string_free`].
 */
enum ExspStatus exsp_group_label(const struct ExspGroup *group, char **out);

/**
 * Brute-force element-order census of the group as JSON
 * `{"order": "...", "census": {"<d>": "<count>", ...}}`.
 *
 * # Safety
 * `group` must be a live handle; `out` must be writable. Free the result
 * with [`exsp_string_free`].
 */
enum ExspStatus exsp_group_census_json(const struct ExspGroup *group, char **out);

/**
 * Closed-form statistics for a family member, as the canonical stats JSON.
 *
 * # Safety
 * `spec` must point to a NUL-terminated string; `out` must be writable.
 * Free the result with [`exsp_string_free`].
 */
enum ExspStatus exsp_stats_json(const char *spec, char **out);

/**
 * Verifies one family member against brute force. Writes the verdict rows
 * as a JSON array and stores the overall flag in `pass`.
 *
 * # Safety
 * `spec` must point to a NUL-terminated string; `out` and `pass` must be
 * writable. Free the string with [`exsp_string_free`].
 */
enum ExspStatus exsp_verify_json(const char *spec, uint64_t budget, char **out, bool *pass);

/**
 * cdeg(M_{p^n}) as a "num/den" string.
 *
 * # Safety
 * `out` must be writable. Free the result with [`exsp_string_free`].
 */
enum ExspStatus exsp_cdeg_modular(uint64_t p, uint32_t n, char **out);

/**
 * cdeg of the product of M_{p^3} over `len` distinct odd primes, as a
 * "num/den" string.
 *
 * # Safety
 * `primes` must point to `len` readable u64 values (it may be NULL when
 * `len` is 0); `out` must be writable. Free the result with
 * [`exsp_string_free`].
 */
enum ExspStatus exsp_cdeg_product(const uint64_t *primes, uintptr_t len, char **out);

/**
 * Greedy approximation of a target cyclicity degree. `target` and
 * `epsilon` accept fractions (`a/b`) or decimals; `prime_limit` 0 selects
 * the default. On success writes the selection JSON; on prime-limit
 * exhaustion returns `RESOURCE_LIMIT` and still writes the best selection.
 *
 * # Safety
 * `target` and `epsilon` must point to NUL-terminated strings; `out` must
 * be writable. Free the result with [`exsp_string_free`].
 */
enum ExspStatus exsp_approx_json(const char *target,
                                 const char *epsilon,
                                 uint64_t prime_limit,
                                 char **out);

/**
 * The bundled reference table, recomputed and flagged, as a JSON array.
 *
 * # Safety
 * `out` must be writable. Free the result with [`exsp_string_free`].
 */
enum ExspStatus exsp_table_json(char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
