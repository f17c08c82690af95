#ifndef HOPF_H
#define HOPF_H

/* Generated by cbindgen from the hopf-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum HopfStatus {
  // Success.
  HOPF_STATUS_OK = 0,
  // A required pointer argument was NULL.
  HOPF_STATUS_NULL_POINTER = 1,
  // The input was not valid UTF-8 / JSON for the expected schema.
  HOPF_STATUS_INVALID_INPUT = 2,
  // The operation itself failed (see hopf_last_error).
  HOPF_STATUS_OPERATION_FAILED = 3,
  // A verification property failed; the report still describes it.
  HOPF_STATUS_PROPERTY_FAILED = 4,
} HopfStatus;

// Parity selector for structure-dependent queries.
typedef enum HopfParity {
  HOPF_PARITY_EVEN = 0,
  HOPF_PARITY_ODD = 1,
} HopfParity;

// Opaque handle to a validated contraction.
typedef struct HopfContraction HopfContraction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread.
//
// The pointer stays valid until the next failing hopf_* call on the same
// thread; do not free it.
const char *hopf_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be a pointer previously returned through a hopf_* out-parameter
// and not yet freed; NULL is ignored.
void hopf_string_free(char *s);

// Parses a contraction from its JSON normal form
// `{"class": "IV"|..., "alpha"/"delta": [re, im], "r": int?, "c": [re, im]?}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
// The returned handle must be released with [`hopf_contraction_free`].
enum HopfStatus hopf_contraction_parse(const char *json, struct HopfContraction **out);

// Classifies a polynomial map (PolyMap JSON) into its Wehler normal form.
//
// # Safety
// Same contract as [`hopf_contraction_parse`].
enum HopfStatus hopf_classify(const char *map_json, struct HopfContraction **out);

// Releases a contraction handle (NULL is ignored).
//
// # Safety
// `h` must come from this library and not be freed twice.
void hopf_contraction_free(struct HopfContraction *h);

// Writes the contraction's JSON normal form to `out`.
//
// # Safety
// `h` must be a live handle; `out` a valid pointer; free the string with
// [`hopf_string_free`].
enum HopfStatus hopf_contraction_to_json(const struct HopfContraction *h, char **out);

// Existence flags for Real structures on H_f.
//
// # Safety
// `h` must be a live handle; `out` a valid pointer (string freed by caller).
enum HopfStatus hopf_existence(const struct HopfContraction *h, char **out);

// Normalizes a lift (PolyMap JSON) to its canonical model; the report is
// `{"psi": ..., "parity": ..., "deck_power": ..., "model": ...}`.
//
// # Safety
// Pointer contract as above.
enum HopfStatus hopf_normalize(const struct HopfContraction *h, const char *lift_json, char **out);

// The flow map f^t as PolyMap JSON.
//
// # Safety
// Pointer contract as above.
enum HopfStatus hopf_flow(const struct HopfContraction *h, double t, char **out);

// The k-th root f^{1/k} as PolyMap JSON.
//
// # Safety
// Pointer contract as above.
enum HopfStatus hopf_kth_root(const struct HopfContraction *h, uint32_t k, char **out);

// The equivariant chart for the canonical structure of the given parity;
// report `{"model", "route", "forward", "backward"}`.
//
// # Safety
// Pointer contract as above.
enum HopfStatus hopf_chart(const struct HopfContraction *h, enum HopfParity parity, char **out);

// Real locus report for the canonical structure of the given parity.
//
// # Safety
// Pointer contract as above.
enum HopfStatus hopf_real_locus(const struct HopfContraction *h,
                                enum HopfParity parity,
                                char **out);

// Quotient descriptor for the canonical structure of the given parity.
//
// # Safety
// Pointer contract as above.
enum HopfStatus hopf_quotient(const struct HopfContraction *h, enum HopfParity parity, char **out);

// Real-structure status of the line bundle L_zeta (PicardDatum JSON).
//
// # Safety
// `out` must be a valid pointer (string freed by caller).
enum HopfStatus hopf_picard_line_bundle(enum HopfParity parity,
                                        double zeta_re,
                                        double zeta_im,
                                        char **out);

// The Real automorphism group descriptor for the canonical structure.
//
// # Safety
// Pointer contract as above.
enum HopfStatus hopf_aut_group(const struct HopfContraction *h, enum HopfParity parity, char **out);

// Verifies equivariance of the canonical chart on seeded samples; the report
// carries max_residual / tolerance / pass.
//
// # Safety
// Pointer contract as above.
enum HopfStatus hopf_chart_verify(const struct HopfContraction *h,
                                  enum HopfParity parity,
                                  size_t samples,
                                  uint64_t seed,
                                  char **out);

// Runs a named verification suite (same names as `hopf verify --suite`).
// `samples` = 0 keeps each property's default count.
//
// # Safety
// Pointer contract as above.
enum HopfStatus hopf_verify_suite(const char *suite, uint64_t seed, size_t samples, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOPF_H */
