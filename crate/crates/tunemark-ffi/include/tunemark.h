#ifndef TUNEMARK_H
#define TUNEMARK_H

/* Generated by cbindgen from the tunemark-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum TmStatus {
  TmStatus_Ok = 0,
  TmStatus_NullArgument = 1,
  TmStatus_InvalidUtf8 = 2,
  TmStatus_InvalidJson = 3,
  TmStatus_InvalidSpec = 4,
  TmStatus_BuildFailed = 5,
  TmStatus_VerifyFailed = 6,
  TmStatus_UnknownName = 7,
} TmStatus;

/**
 * Opaque watermark spec handle.
 */
typedef struct TmSpec TmSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *tm_version(void);

/**
 * Build one of the built-in watermark specs ("I".."VI").
 *
 * # Safety
 * `name` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum TmStatus tm_spec_builtin(const char *name, struct TmSpec **out);

/**
 * Parse a watermark spec from its JSON document.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum TmStatus tm_spec_from_json(const char *json, struct TmSpec **out);

/**
 * Serialize a spec back to JSON. Free the result with `tm_string_free`.
 *
 * # Safety
 * `spec` must be a pointer returned by a `tm_spec_*` constructor.
 */
char *tm_spec_to_json(const struct TmSpec *spec);

/**
 * # Safety
 * `spec` must be a pointer returned by a `tm_spec_*` constructor, not yet
 * freed; NULL is ignored.
 */
void tm_spec_free(struct TmSpec *spec);

/**
 * Exact test on a 2x2 table (row-major: trigger manipulated/correct,
 * reference manipulated/correct). `two_sided = false` runs the upper-tail
 * test. Outputs land in `p_value_out` / `reject_out`.
 *
 * # Safety
 * `p_value_out` and `reject_out` must be valid writable pointers.
 */
enum TmStatus tm_fisher_exact(uint64_t n_t_m,
                              uint64_t n_t_c,
                              uint64_t n_r_m,
                              uint64_t n_r_c,
                              bool two_sided,
                              double alpha,
                              double *p_value_out,
                              bool *reject_out);

/**
 * Squared inverse vocabulary size: the blind guess probability for a
 * (trigger, decoration) pair.
 *
 * # Safety
 * `out` must be a valid writable pointer.
 */
enum TmStatus tm_guess_probability(uint64_t vocab_size, double *out);

/**
 * Build a backdoor dataset and return it as a JSONL string (one record per
 * line). Free with `tm_string_free`.
 *
 * # Safety
 * `spec` must be a live spec handle and `out` a valid pointer.
 */
enum TmStatus tm_generate_backdoor_jsonl(const struct TmSpec *spec,
                                         uintptr_t n_trigger,
                                         uintptr_t n_reference,
                                         uint64_t seed,
                                         char **out);

/**
 * Validate a mixture of specs given as a JSON array; returns the violation
 * list as JSON in `out` (empty array means the mix is sound).
 *
 * # Safety
 * `specs_json` must be a valid NUL-terminated string and `out` valid.
 */
enum TmStatus tm_validate_mix_json(const char *specs_json, char **out);

/**
 * Run end-to-end verification of `spec` against a simulator profile given
 * as JSON; the verdict report is returned as JSON in `out`.
 *
 * # Safety
 * `spec` must be a live spec handle, `profile_json` a valid NUL-terminated
 * string, and `out` a valid pointer.
 */
enum TmStatus tm_verify_profile(const struct TmSpec *spec,
                                const char *profile_json,
                                uintptr_t n,
                                uint64_t seed,
                                double alpha,
                                char **out);

/**
 * # Safety
 * `s` must be a string returned by this library, not yet freed; NULL is
 * ignored.
 */
void tm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TUNEMARK_H */
