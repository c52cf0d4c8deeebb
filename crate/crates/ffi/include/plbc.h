#ifndef PLBC_H
#define PLBC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PlbcStatus {
  PLBC_STATUS_OK = 0,
  PLBC_STATUS_NULL_POINTER = 1,
  PLBC_STATUS_INVALID_ARGUMENT = 2,
  PLBC_STATUS_INVALID_SPEC = 3,
  PLBC_STATUS_UNSUPPORTED = 4,
  PLBC_STATUS_DECODE_FAILURE = 5,
  PLBC_STATUS_INTERNAL = 6,
} PlbcStatus;

typedef enum PlbcEncoder {
  PLBC_ENCODER_OPTIMAL = 0,
  PLBC_ENCODER_ONE_STEP = 1,
  PLBC_ENCODER_TWO_STEP = 2,
} PlbcEncoder;

typedef enum PlbcBoundKind {
  PLBC_BOUND_KIND_EXACT_ZERO = 0,
  PLBC_BOUND_KIND_ESTIMATE = 1,
  PLBC_BOUND_KIND_UPPER_BOUND = 2,
} PlbcBoundKind;

/**
 * Opaque code object.
 */
typedef struct PlbcCodeHandle PlbcCodeHandle;

typedef struct PlbcParams {
  size_t n;
  size_t k;
  size_t l;
  size_t r;
  size_t d1;
  size_t d0;
  size_t t0;
} PlbcParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *plbc_last_error(void);

/**
 * Builds a code from a JSON code-spec document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum PlbcStatus plbc_code_from_json(const char *json, struct PlbcCodeHandle **out);

/**
 * Builds a partitioned cyclic code from hex generator polynomials such as
 * `"0xb"`, with the default primitive polynomial for `n`.
 *
 * # Safety
 * `g1` and `g0` must be nul-terminated strings and `out` a writable pointer.
 */
enum PlbcStatus plbc_code_pbch(size_t n,
                               const char *g1,
                               const char *g0,
                               struct PlbcCodeHandle **out);

/**
 * Builds the `r = 0` family member of length `n` whose masking code has
 * designed distance `delta`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum PlbcStatus plbc_code_family(size_t n, size_t delta, struct PlbcCodeHandle **out);

/**
 * Releases a handle; NULL is ignored.
 *
 * # Safety
 * `handle` must come from one of the constructors and not be used again.
 */
void plbc_code_free(struct PlbcCodeHandle *handle);

/**
 * # Safety
 * `handle` must be live and `out` writable.
 */
enum PlbcStatus plbc_code_params(const struct PlbcCodeHandle *handle, struct PlbcParams *out);

/**
 * Encodes the `k` message bits `w` over `u` defects at `positions` with
 * stuck values `stuck`. Writes `n` codeword bytes and the number of
 * defects left unmasked.
 *
 * # Safety
 * `w` holds `k` bytes, `positions` and `stuck` hold `u` entries each,
 * `codeword` has room for `n` bytes and `unmasked` is writable.
 */
enum PlbcStatus plbc_encode(const struct PlbcCodeHandle *handle,
                            enum PlbcEncoder encoder,
                            const uint8_t *w,
                            const size_t *positions,
                            const uint8_t *stuck,
                            size_t u,
                            uint8_t *codeword,
                            size_t *unmasked);

/**
 * Syndrome-decodes the `n` bytes of `y` and writes `k` message bytes.
 *
 * # Safety
 * `y` holds `n` bytes and `w_out` has room for `k` bytes.
 */
enum PlbcStatus plbc_decode(const struct PlbcCodeHandle *handle, const uint8_t *y, uint8_t *w_out);

/**
 * Masking-failure value at `u` defects: zero below `d0`, the estimate up
 * to `d0 + t0`, the upper bound beyond. With `approx` the weight
 * distribution is the binomial approximation instead of the exact one.
 *
 * # Safety
 * `value` and `kind` must be writable.
 */
enum PlbcStatus plbc_bound(const struct PlbcCodeHandle *handle,
                           size_t u,
                           bool approx,
                           double *value,
                           enum PlbcBoundKind *kind);

/**
 * Counts masking failures over `trials` random messages and `u`-defect
 * patterns. The count depends only on the arguments.
 *
 * # Safety
 * `failures` must be writable.
 */
enum PlbcStatus plbc_simulate(const struct PlbcCodeHandle *handle,
                              enum PlbcEncoder encoder,
                              size_t u,
                              uint64_t trials,
                              uint64_t seed,
                              uint64_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLBC_H */
