#ifndef HYPERPOLAR_H
#define HYPERPOLAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every call.
 */
typedef enum HpStatus {
  HP_STATUS_OK = 0,
  /*
   A required pointer was null.
   */
  HP_STATUS_NULL_POINTER = 1,
  /*
   Bad length, interval, non-finite sample or configuration.
   */
  HP_STATUS_INVALID_ARGUMENT = 2,
  /*
   The signal has no well-defined polar form, e.g. a vanishing sample.
   */
  HP_STATUS_DECOMPOSITION_FAILED = 3,
  /*
   The output buffer holds fewer elements than [`hp_len`].
   */
  HP_STATUS_BUFFER_TOO_SMALL = 4,
  /*
   The requested quantity was not computed for this signal.
   */
  HP_STATUS_NOT_AVAILABLE = 5,
  /*
   An internal panic was caught at the boundary.
   */
  HP_STATUS_INTERNAL = 6,
} HpStatus;

/*
 Opaque decomposition result.
 */
typedef struct HpDecomposition HpDecomposition;

/*
 Decomposition settings; start from [`hp_config_default`].
 */
typedef struct HpConfig {
  /*
   Interval for the initial envelope phase, radians, inside one quarter-plane.
   */
  double phase_init_low;
  double phase_init_high;
  /*
   Degeneracy threshold relative to the largest `‖s‖`.
   */
  double eps_mag;
  /*
   Zero-crossing guard relative to the neighbouring half-period peaks.
   */
  double eta;
  /*
   Interpolate through degenerate samples instead of failing.
   */
  bool mask_degenerate;
  /*
   Compute the envelope frequency when the envelope is analytic.
   */
  bool envelope_frequency;
} HpConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Default settings: initial envelope phase in `[0, π/2]`, `eps_mag = 1e-12`,
 `eta = 0.5`, no masking, envelope frequency on.
 */
struct HpConfig hp_config_default(void);

/*
 Hyperanalytic signal `s = z + qht(z)·j` of `z = re + i·im`. Writes `4·len`
 values to `s_out` as consecutive `(r, i, j, k)` tuples.

 # Safety
 `re` and `im` are valid for `len` reads; `s_out` is valid for `4·len` writes.
 */
enum HpStatus hp_hyperanalytic(const double *re,
                               const double *im,
                               size_t len,
                               double dt,
                               double *s_out);

/*
 Decomposes the hyperanalytic signal of `z = re + i·im` sampled at
 `t0 + n·dt`. `config` may be null for the defaults. On success `*out`
 holds a new handle.

 # Safety
 `re` and `im` are valid for `len` reads, `config` is null or valid and
 `out` is valid for one write.
 */
enum HpStatus hp_decompose_complex(const double *re,
                                   const double *im,
                                   size_t len,
                                   double t0,
                                   double dt,
                                   const struct HpConfig *config,
                                   struct HpDecomposition **out);

/*
 Decomposes a quaternion series given as `4·len` values in `(r, i, j, k)`
 order.

 # Safety
 `q` is valid for `4·len` reads, `config` is null or valid and `out` is
 valid for one write.
 */
enum HpStatus hp_decompose_quaternion(const double *q,
                                      size_t len,
                                      double t0,
                                      double dt,
                                      const struct HpConfig *config,
                                      struct HpDecomposition **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `h` is null or a handle from this library that has not been freed.
 */
void hp_free(struct HpDecomposition *h);

/*
 Number of samples; 0 for a null handle.

 # Safety
 `h` is null or a live handle.
 */
size_t hp_len(const struct HpDecomposition *h);

/*
 Samples where the sign-corrected phase axis had to be forced into the
 first quadrant.

 # Safety
 `h` is null or a live handle.
 */
size_t hp_canonical_violations(const struct HpDecomposition *h);

/*
 Complex envelope `A = a + i·b`.

 # Safety
 `h` is a live handle; `a` and `b` are valid for `cap` writes.
 */
enum HpStatus hp_envelope(const struct HpDecomposition *h, double *a, double *b, size_t cap);

/*
 Unwrapped envelope phase `φ_A`, radians.

 # Safety
 `h` is a live handle; `phi` is valid for `cap` writes.
 */
enum HpStatus hp_envelope_phase(const struct HpDecomposition *h, double *phi, size_t cap);

/*
 Unwrapped complex phase `B = c + i·d`, radians.

 # Safety
 `h` is a live handle; `c` and `d` are valid for `cap` writes.
 */
enum HpStatus hp_phase(const struct HpDecomposition *h, double *c, double *d, size_t cap);

/*
 Carrier `e^{Bj} = α + β·j + γ·k`.

 # Safety
 `h` is a live handle; `alpha`, `beta` and `gamma` are valid for `cap` writes.
 */
enum HpStatus hp_carrier(const struct HpDecomposition *h,
                         double *alpha,
                         double *beta,
                         double *gamma,
                         size_t cap);

/*
 Instantaneous complex frequency `f_B = f_Br + i·f_Bi`, Hz.

 # Safety
 `h` is a live handle; `f_br` and `f_bi` are valid for `cap` writes.
 */
enum HpStatus hp_frequency(const struct HpDecomposition *h, double *f_br, double *f_bi, size_t cap);

/*
 Envelope frequency `f_A`, Hz. Returns `NOT_AVAILABLE` when the envelope
 is not analytic or the quantity was switched off.

 # Safety
 `h` is a live handle; `f_a` is valid for `cap` writes.
 */
enum HpStatus hp_envelope_frequency(const struct HpDecomposition *h, double *f_a, size_t cap);

/*
 Copies the last error message of this thread into `buf` as a
 NUL-terminated string, truncated to `cap - 1` bytes. Returns the full
 message length in bytes, 0 when the last call succeeded. `buf` may be
 null to query the length.

 # Safety
 `buf` is null or valid for `cap` writes.
 */
size_t hp_last_error_message(char *buf, size_t cap);

/*
 Sample index of the last failure on this thread, or -1.
 */
int64_t hp_last_error_index(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERPOLAR_H */
