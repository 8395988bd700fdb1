#ifndef KT_FFI_H
#define KT_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum KtStatus {
  KT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  KT_STATUS_NULL_ARGUMENT = 1,
  /**
   * Input text was not valid UTF-8.
   */
  KT_STATUS_INVALID_UTF8 = 2,
  /**
   * The model source has a diagnostic; see `kt_last_error`.
   */
  KT_STATUS_PARSE = 3,
  /**
   * Arguments out of range or an inconsistent model.
   */
  KT_STATUS_INVALID = 4,
  /**
   * An internal error; the library state is unaffected.
   */
  KT_STATUS_INTERNAL = 5,
} KtStatus;

/**
 * A parsed and validated model.
 */
typedef struct KtModel KtModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *kt_version(void);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *kt_last_error(void);

/**
 * Parses and validates model source text.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out_model` valid for a
 * pointer write.
 */
enum KtStatus kt_model_parse(const char *source, struct KtModel **out_model);

/**
 * Releases a model handle; null is ignored.
 *
 * # Safety
 * `model` must be null or a handle from `kt_model_parse` not yet freed.
 */
void kt_model_free(struct KtModel *model);

/**
 * Releases a string returned by the library; null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void kt_string_free(char *s);

/**
 * Canonical source text of the model.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for a pointer write.
 */
enum KtStatus kt_model_canonical_text(const struct KtModel *model, char **out);

/**
 * Euler-Lagrange expressions, one `E[<component>] = <poly>` line each.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for a pointer write.
 */
enum KtStatus kt_model_euler_lagrange(const struct KtModel *model, char **out);

/**
 * Nilpotency report as JSON. `out_failures`, if not null, receives the
 * number of failed checks.
 *
 * # Safety
 * `model` must be a live handle, `out_json` valid for a pointer write and
 * `out_failures` null or valid for a write.
 */
enum KtStatus kt_model_check_json(const struct KtModel *model,
                                  char **out_json,
                                  size_t *out_failures);

/**
 * Bounded Noether-identity search as a JSON report.
 *
 * # Safety
 * `model` must be a live handle and `out_json` valid for a pointer write.
 */
enum KtStatus kt_model_search_json(const struct KtModel *model,
                                   size_t jet_order,
                                   uint32_t degree,
                                   char **out_json);

/**
 * Builds and verifies the BF model of dimension `dim`, returning the JSON
 * report. `out_failures`, if not null, receives the number of failed checks.
 *
 * # Safety
 * `out_json` must be valid for a pointer write and `out_failures` null or
 * valid for a write.
 */
enum KtStatus kt_bf_verify_json(size_t dim,
                                size_t jet_order,
                                uint32_t degree,
                                char **out_json,
                                size_t *out_failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KT_FFI_H */
