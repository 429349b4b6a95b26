#ifndef RADON_H
#define RADON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of an FFI call. `RADON_STATUS_OK` is zero; every other value is an error.
typedef enum RadonStatus {
  RADON_STATUS_OK = 0,
  RADON_STATUS_NULL_POINTER = 1,
  RADON_STATUS_INVALID_PARAMETER = 2,
  RADON_STATUS_DIMENSION_MISMATCH = 3,
  RADON_STATUS_OVERFLOW = 4,
  RADON_STATUS_PRECONDITION = 5,
  RADON_STATUS_BUDGET_EXCEEDED = 6,
  RADON_STATUS_QUADRATURE = 7,
  RADON_STATUS_NOT_A_MEMBER = 8,
  RADON_STATUS_RETRY_LIMIT = 9,
  RADON_STATUS_EVALUATION = 10,
  RADON_STATUS_PARSE = 11,
  RADON_STATUS_UTF8 = 12,
  RADON_STATUS_PANIC = 13,
} RadonStatus;

// Opaque finitely supported function on a lattice `Z^m`.
typedef struct RadonFunction RadonFunction;

// Opaque polynomial mapping `Z^k → Z^{d0}`.
typedef struct RadonMapping RadonMapping;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *radon_last_error(void);

// Library version as a static NUL-terminated string.
const char *radon_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void radon_string_free(char *s);

// The zero function on `Z^dim`.
//
// # Safety
// `out` must be valid for a pointer write.
enum RadonStatus radon_function_new(size_t dim, struct RadonFunction **out);

// Parses `{"dim":…,"points":[…],"values":[[re,im],…]}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` valid for a pointer write.
enum RadonStatus radon_function_from_json(const char *json, struct RadonFunction **out);

// Serializes in the format read by [`radon_function_from_json`].
//
// # Safety
// `f` must be a live handle and `out` valid for a pointer write.
enum RadonStatus radon_function_to_json(const struct RadonFunction *f, char **out);

// Adds `re + i·im` at `point` (length `dim` of the function).
//
// # Safety
// `f` must be a live handle; `point` must hold `dim` values.
enum RadonStatus radon_function_add(struct RadonFunction *f,
                                    const int64_t *point,
                                    double re,
                                    double im);

// Reads the value at `point`; zero off the support.
//
// # Safety
// `f` must be a live handle; `point` must hold `dim` values; `re`, `im`
// must be valid for writes.
enum RadonStatus radon_function_get(const struct RadonFunction *f,
                                    const int64_t *point,
                                    double *re,
                                    double *im);

// Lattice dimension, or 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
size_t radon_function_dim(const struct RadonFunction *f);

// Number of support points, or 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
size_t radon_function_len(const struct RadonFunction *f);

// # Safety
// `f` must be null or a live handle; it is invalid afterwards.
void radon_function_free(struct RadonFunction *f);

// `y ↦ (y, y², …, y^d)` on `Z`.
//
// # Safety
// `out` must be valid for a pointer write.
enum RadonStatus radon_mapping_moment_curve(uint32_t d, struct RadonMapping **out);

// The identity on `Z^k`.
//
// # Safety
// `out` must be valid for a pointer write.
enum RadonStatus radon_mapping_identity(size_t k, struct RadonMapping **out);

// Parses `{"k":1,"components":[[{"coeff":1,"exp":[1]}],…]}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` valid for a pointer write.
enum RadonStatus radon_mapping_from_json(const char *json, struct RadonMapping **out);

// Source dimension `k`, or 0 for a null handle.
//
// # Safety
// `p` must be null or a live handle.
size_t radon_mapping_source_dim(const struct RadonMapping *p);

// Target dimension `d0`, or 0 for a null handle.
//
// # Safety
// `p` must be null or a live handle.
size_t radon_mapping_target_dim(const struct RadonMapping *p);

// # Safety
// `p` must be null or a live handle; it is invalid afterwards.
void radon_mapping_free(struct RadonMapping *p);

// Average of `f` along `P` over `[1, n]^k`; a new handle goes to `out`.
//
// # Safety
// `f`, `p` must be live handles and `out` valid for a pointer write.
enum RadonStatus radon_apply_average(const struct RadonFunction *f,
                                     const struct RadonMapping *p,
                                     uint64_t n,
                                     struct RadonFunction **out);

// Truncated singular integral of `f` along `P` with a built-in kernel
// (`hilbert` or `riesz-<i>`), summed over `0 < |y|∞ ≤ n`.
//
// # Safety
// `f`, `p` must be live handles, `kernel` a NUL-terminated string and `out`
// valid for a pointer write.
enum RadonStatus radon_apply_truncated(const struct RadonFunction *f,
                                       const struct RadonMapping *p,
                                       const char *kernel,
                                       uint64_t n,
                                       struct RadonFunction **out);

// Pointwise `sup` of the averages over the scales in `grid[0..len]`.
//
// # Safety
// `f`, `p` must be live handles, `grid` must hold `len` values and `out` be
// valid for a pointer write.
enum RadonStatus radon_maximal_average(const struct RadonFunction *f,
                                       const struct RadonMapping *p,
                                       const uint64_t *grid,
                                       size_t len,
                                       struct RadonFunction **out);

// `max |G(a/q)|` over reduced `a` for the moment curve of degree `d`.
//
// # Safety
// `out` must be valid for a write.
enum RadonStatus radon_gauss_max_moment_curve(uint64_t q, uint32_t d, double *out);

// Checks `max_j |a_j| ≤ |a_{j0}| + √2 Σ_i (square sum at scale i)` for a
// complex sequence of length `2^s + 1` given as separate real and imaginary
// arrays. Writes 1 if it holds and 0 otherwise.
//
// # Safety
// `re` and `im` must hold `len` values; `holds` must be valid for a write.
enum RadonStatus radon_rm_check(const double *re,
                                const double *im,
                                size_t len,
                                size_t j0,
                                int32_t *holds);

// Runs one acceptance criterion and returns its JSON record
// `{"id","name","passed","detail"}`. A failed criterion still returns `RADON_STATUS_OK`.
//
// # Safety
// `id` must be a NUL-terminated string and `out` valid for a pointer write.
enum RadonStatus radon_run_criterion(const char *id, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RADON_H */
