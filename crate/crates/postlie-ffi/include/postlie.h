#ifndef POSTLIE_H
#define POSTLIE_H

/* generated by cbindgen from the postlie-ffi crate; do not edit by hand */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every entry point.
typedef enum PlStatus {
  // Success.
  PL_STATUS_OK = 0,
  // A required pointer argument was NULL.
  PL_STATUS_NULL_ARGUMENT = 1,
  // Malformed input: bad UTF-8, parse error, unknown name, wrong shape.
  PL_STATUS_INVALID_ARGUMENT = 2,
  // A mathematical check failed or a precondition does not hold.
  PL_STATUS_MATH_ERROR = 3,
  // Internal invariant violation (a bug; never expected).
  PL_STATUS_INTERNAL_ERROR = 4,
} PlStatus;

// Opaque symbol context handle.
typedef struct PlContext PlContext;

// Opaque polynomial handle.
typedef struct PlPoly PlPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *pl_last_error(void);

// Frees a string returned by any `pl_*` function.
//
// # Safety
// `s` must be a pointer previously handed out by this library through a
// `char **` out-parameter, or NULL.
void pl_string_free(char *s);

// Creates a symbol context from `len` symbol names.
//
// # Safety
// `names` must point to `len` valid NUL-terminated strings; `out` must be
// a valid pointer.
enum PlStatus pl_context_new(const char *const *names, size_t len, struct PlContext **out);

// # Safety
// `ctx` must be a pointer from `pl_context_new`, or NULL.
void pl_context_free(struct PlContext *ctx);

// Parses a polynomial in the text grammar over the given context.
//
// # Safety
// `ctx` must be a live context handle; `text` a valid string; `out` a
// valid pointer.
enum PlStatus pl_poly_parse(const struct PlContext *ctx, const char *text, struct PlPoly **out);

// # Safety
// `poly` must be a pointer from this library, or NULL.
void pl_poly_free(struct PlPoly *poly);

// Formats a polynomial canonically (graded-lex term order).
//
// # Safety
// `poly` must be a live handle; `out` a valid pointer.
enum PlStatus pl_poly_format(const struct PlPoly *poly, char **out);

// Additive inverse.
//
// # Safety
// `a` must be a live handle; `out` a valid pointer.
enum PlStatus pl_poly_neg(const struct PlPoly *a, struct PlPoly **out);

// Evaluates a polynomial at rational values given as "p/q" strings; the
// exact result is returned in the same notation.
//
// # Safety
// `poly` must be a live handle; `names`/`values` must point to `len`
// valid strings each; `out` must be a valid pointer.
enum PlStatus pl_poly_eval(const struct PlPoly *poly,
                           const char *const *names,
                           const char *const *values,
                           size_t len,
                           char **out);

// Checks an embedding document (CLI embedding format): morphism property
// and t-bijectivity. The report is a JSON object with `morphism_ok`,
// `t_bijective` and `t_det` fields.
//
// # Safety
// `embedding_json` must be a valid string; `out` a valid pointer.
enum PlStatus pl_verify_embedding(const char *embedding_json, char **out);

// Induces the product structure of an embedding; the output is a structure
// document in the CLI format, ready for `pl_verify_structure`.
//
// # Safety
// `embedding_json` must be a valid string; `out` a valid pointer.
enum PlStatus pl_induce(const char *embedding_json, char **out);

// Verifies the three product axioms of a structure document; the report
// carries one boolean and optional witness per condition.
//
// # Safety
// `structure_json` must be a valid string; `out` a valid pointer.
enum PlStatus pl_verify_structure(const char *structure_json, char **out);

// Evaluates the completeness criteria of a structure document. The report
// carries `right_nilpotent`, `left_nilpotent`, `shifted_nilpotent`, the
// caveat flag, and `unit_shift_det`.
//
// # Safety
// `structure_json` must be a valid string; `out` a valid pointer.
enum PlStatus pl_completeness(const char *structure_json, char **out);

// Characteristic polynomial of a multiplication map ("left", "right",
// "shifted" or "ad") of a structure document, as a display string.
//
// # Safety
// `structure_json` and `map` must be valid strings; `out` a valid pointer.
enum PlStatus pl_charpoly(const char *structure_json, const char *map, char **out);

// Jordan decomposition of a constant rational matrix document
// (array of rows of "p/q" strings).
//
// # Safety
// `matrix_json` must be a valid string; `out` a valid pointer.
enum PlStatus pl_jordan(const char *matrix_json, char **out);

// Verifies one bundled catalog row by id at its default parameters and
// returns the row report as JSON. A clean row yields `PL_STATUS_OK`; a row
// with mismatches yields `PL_STATUS_MATH_ERROR` (report still written).
//
// # Safety
// `row_id` must be a valid string; `out` a valid pointer.
enum PlStatus pl_catalog_verify_row(const char *row_id, char **out);

// Verifies the whole bundled catalog at default parameters; the report is
// the number of rows and mismatches plus per-row verdicts.
//
// # Safety
// `out` must be a valid pointer.
enum PlStatus pl_catalog_verify_all(char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSTLIE_H */
