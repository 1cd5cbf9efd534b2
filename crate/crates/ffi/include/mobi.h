#ifndef MOBI_H
#define MOBI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MobiStatus {
  MOBI_STATUS_OK = 0,
  /**
   * The call succeeded and at least one law failed.
   */
  MOBI_STATUS_LAW_FAILED = 1,
  MOBI_STATUS_NULL_ARGUMENT = 2,
  MOBI_STATUS_INVALID_UTF8 = 3,
  MOBI_STATUS_UNKNOWN_NAME = 4,
  MOBI_STATUS_INVALID_PARAMETER = 5,
  MOBI_STATUS_PARSE_ERROR = 6,
  MOBI_STATUS_INTERNAL = 7,
} MobiStatus;

typedef enum MobiKind {
  MOBI_KIND_ALGEBRA = 0,
  MOBI_KIND_SPACE = 1,
  MOBI_KIND_RING = 2,
  MOBI_KIND_MODULE = 3,
} MobiKind;

/**
 * A built catalog instance.
 */
typedef struct MobiStructure MobiStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mobi_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void mobi_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer to write a string pointer into.
 */
enum MobiStatus mobi_catalog_list(char **out);

/**
 * Build a catalog instance. `params` is null or whitespace-separated
 * `key=value` pairs; vector values separate components with commas.
 *
 * # Safety
 * `name` and non-null `params` must be NUL-terminated strings; `out` must
 * be a valid pointer to write a handle into.
 */
enum MobiStatus mobi_structure_new(const char *name,
                                   const char *params,
                                   struct MobiStructure **out);

/**
 * # Safety
 * `handle` must be null or a handle from `mobi_structure_new`, not yet freed.
 */
void mobi_structure_free(struct MobiStructure *handle);

/**
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum MobiStatus mobi_structure_kind(const struct MobiStructure *handle, enum MobiKind *out);

/**
 * Check the axioms of the structure. `samples == 0` asks for exhaustive
 * checking, which falls back to sampling on infinite carriers. The JSON
 * report is written to `out` whether or not the laws pass.
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum MobiStatus mobi_structure_check(const struct MobiStructure *handle,
                                     size_t samples,
                                     uint64_t seed,
                                     char **out);

/**
 * Elaborate definitions in the text language and check each of them.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MobiStatus mobi_dsl_check(const char *source, size_t samples, uint64_t seed, char **out);

/**
 * Finite models of the given size up to isomorphism, as JSON.
 * `limit == 0` means no limit.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MobiStatus mobi_search(size_t size, bool distinct_constants, size_t limit, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOBI_H */
