#ifndef COPOSITIVE_H
#define COPOSITIVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Scalar backend selector for functions that build a polynomial from parameters.
typedef enum CopositiveBackend {
  COPOSITIVE_BACKEND_RATIONAL = 0,
  COPOSITIVE_BACKEND_REAL = 1,
} CopositiveBackend;

// Result codes. `Ok` is zero; everything else is a failure.
typedef enum CopositiveStatus {
  COPOSITIVE_STATUS_OK = 0,
  COPOSITIVE_STATUS_NULL_POINTER = 1,
  COPOSITIVE_STATUS_INVALID_UTF8 = 2,
  COPOSITIVE_STATUS_PARSE = 3,
  COPOSITIVE_STATUS_INVALID_INPUT = 4,
  COPOSITIVE_STATUS_NOT_COPOSITIVE = 5,
  COPOSITIVE_STATUS_DEGREE_TOO_LOW = 6,
  COPOSITIVE_STATUS_NOT_BASE_BOUNDARY = 7,
  COPOSITIVE_STATUS_NOT_DIVISIBLE = 8,
  COPOSITIVE_STATUS_INTERNAL_INCONSISTENCY = 9,
  COPOSITIVE_STATUS_PANIC = 10,
} CopositiveStatus;

// Opaque polynomial handle.
typedef struct CopositivePoly CopositivePoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses `{"backend": "rational"|"real", "coeffs": [...]}` or a bare
// coefficient array (rational). Coefficients are in ascending degree.
//
// # Safety
// `json` must be a valid nul-terminated string; `out` must be writable.
enum CopositiveStatus copositive_poly_from_json(const char *json, struct CopositivePoly **out);

// Builds the image of a parameter vector (`{"params": [...]}` or a bare
// array of nonnegative scalars) on the chosen backend.
//
// # Safety
// `params_json` must be a valid nul-terminated string; `out` must be writable.
enum CopositiveStatus copositive_poly_from_params(const char *params_json,
                                                  enum CopositiveBackend backend,
                                                  struct CopositivePoly **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `poly` must come from this library and not have been freed already.
void copositive_poly_free(struct CopositivePoly *poly);

// Degree of the polynomial; `-1` for the zero polynomial.
//
// # Safety
// `poly` must be a live handle; `out` must be writable.
enum CopositiveStatus copositive_poly_degree(const struct CopositivePoly *poly, int64_t *out);

// JSON form of the polynomial.
//
// # Safety
// `poly` must be a live handle; `out` must be writable.
enum CopositiveStatus copositive_poly_to_json(const struct CopositivePoly *poly, char **out);

// Whether `p(x) >= 0` for every `x >= 0`.
//
// # Safety
// `poly` must be a live handle; `out` must be writable.
enum CopositiveStatus copositive_is_copositive(const struct CopositivePoly *poly, bool *out);

// Whether the polynomial is copositive with a double root in `[0, inf)`.
//
// # Safety
// `poly` must be a live handle; `out` must be writable.
enum CopositiveStatus copositive_is_base_boundary(const struct CopositivePoly *poly, bool *out);

// Recovers a parameter vector. Writes a JSON object with the fields
// `params`, `unique`, `ambiguity_levels` and `precision_achieved`.
//
// # Safety
// `poly` must be a live handle; `out` must be writable.
enum CopositiveStatus copositive_invert(const struct CopositivePoly *poly, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void copositive_string_free(char *s);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *copositive_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COPOSITIVE_H */
