#ifndef CMV_H
#define CMV_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CmvStatus {
  CMV_STATUS_OK = 0,
  CMV_STATUS_NULL_POINTER = 1,
  CMV_STATUS_INVALID_ARGUMENT = 2,
  CMV_STATUS_INVALID_SCHEME = 3,
  CMV_STATUS_INVALID_COEFFICIENT = 4,
  CMV_STATUS_Z_IN_SPECTRUM = 5,
  CMV_STATUS_NUMERICAL = 6,
  CMV_STATUS_BUFFER_TOO_SMALL = 7,
  CMV_STATUS_PANIC = 8,
} CmvStatus;

typedef enum CmvSamplingMode {
  /**
   * `count × count` cell-centred phase grid.
   */
  CMV_SAMPLING_MODE_GRID = 0,
  /**
   * `count` uniform phases drawn from `seed`.
   */
  CMV_SAMPLING_MODE_MONTE_CARLO = 1,
} CmvSamplingMode;

/**
 * Opaque Verblunsky coefficient scheme.
 */
typedef struct CmvScheme CmvScheme;

/**
 * Opaque finite CMV window.
 */
typedef struct CmvWindow CmvWindow;

typedef struct CmvComplex {
  double re;
  double im;
} CmvComplex;

typedef struct CmvLyapunov {
  uintptr_t n;
  double mean;
  /**
   * Zero for grid sampling.
   */
  double std_error;
  uintptr_t samples;
} CmvLyapunov;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cmv_version(void);

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *cmv_last_error_message(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library and not yet freed.
 */
void cmv_string_free(char *s);

/**
 * Builds a scheme from its JSON form
 * (`{"coefficients": [[k, l, re, im], ...], "lambda", "omega", "base_x", "base_y"}`).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a writable pointer.
 */
enum CmvStatus cmv_scheme_from_json(const char *json, struct CmvScheme **out);

/**
 * The two-mode averaged sampler `(e^{2πix} + e^{2πiy})/2` at coupling
 * `lambda`, frequency `omega` and base phase `(x, y)`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum CmvStatus cmv_scheme_two_mode(double lambda,
                                   double omega,
                                   double x,
                                   double y,
                                   struct CmvScheme **out);

/**
 * Canonical JSON for a scheme; free the result with `cmv_string_free`.
 *
 * # Safety
 * `scheme` must be a live handle and `out` a writable pointer.
 */
enum CmvStatus cmv_scheme_to_json(const struct CmvScheme *scheme, char **out);

/**
 * # Safety
 * `scheme` must be NULL or a handle not yet freed.
 */
void cmv_scheme_free(struct CmvScheme *scheme);

/**
 * `α_n` at the scheme's base phase. Fails with
 * `CMV_STATUS_INVALID_COEFFICIENT` if `|α_n| >= 1`.
 *
 * # Safety
 * `scheme` must be a live handle and `out` a writable pointer.
 */
enum CmvStatus cmv_verblunsky_at(const struct CmvScheme *scheme, int64_t n, struct CmvComplex *out);

/**
 * `log ‖M_n(z)‖` for the transfer product from the base phase.
 *
 * # Safety
 * `scheme` must be a live handle and `out` a writable pointer.
 */
enum CmvStatus cmv_transfer_log_norm(const struct CmvScheme *scheme,
                                     uintptr_t n,
                                     struct CmvComplex z,
                                     double *out);

/**
 * Phase-averaged finite-scale Lyapunov exponent `L_n(z)`.
 *
 * # Safety
 * `scheme` must be a live handle and `out` a writable pointer.
 */
enum CmvStatus cmv_lyapunov_estimate(const struct CmvScheme *scheme,
                                     struct CmvComplex z,
                                     uintptr_t n,
                                     enum CmvSamplingMode mode,
                                     uintptr_t count,
                                     uint64_t seed,
                                     struct CmvLyapunov *out);

/**
 * Window `[a, b]` with unimodular boundary coefficients `beta`, `gamma`.
 *
 * # Safety
 * `scheme` must be a live handle and `out` a writable pointer.
 */
enum CmvStatus cmv_window_new(const struct CmvScheme *scheme,
                              int64_t a,
                              int64_t b,
                              struct CmvComplex beta,
                              struct CmvComplex gamma,
                              struct CmvWindow **out);

/**
 * Number of sites `b - a + 1`, or 0 for NULL.
 *
 * # Safety
 * `window` must be NULL or a live handle.
 */
uintptr_t cmv_window_size(const struct CmvWindow *window);

/**
 * Copies the window matrix, row-major, into `buf` (`len >= size*size`).
 *
 * # Safety
 * `window` must be a live handle and `buf` must hold `len` elements.
 */
enum CmvStatus cmv_window_matrix(const struct CmvWindow *window,
                                 struct CmvComplex *buf,
                                 uintptr_t len);

/**
 * Eigenvalues sorted by argument in `[0, 2π)` into `buf` (`len >= size`).
 *
 * # Safety
 * `window` must be a live handle and `buf` must hold `len` elements.
 */
enum CmvStatus cmv_window_spectrum(const struct CmvWindow *window,
                                   struct CmvComplex *buf,
                                   uintptr_t len);

/**
 * # Safety
 * `window` must be NULL or a handle not yet freed.
 */
void cmv_window_free(struct CmvWindow *window);

/**
 * Green's function entry `G(j, k; z) = (z L* - M)^{-1}(j, k)` with `j, k`
 * absolute site indices inside the window.
 *
 * # Safety
 * `window` must be a live handle and `out` a writable pointer.
 */
enum CmvStatus cmv_green_entry(const struct CmvWindow *window,
                               int64_t j,
                               int64_t k,
                               struct CmvComplex z,
                               struct CmvComplex *out);

/**
 * Diophantine margin `min_{n<=horizon} ‖nω‖·n·(1+log n)^2` and whether it
 * reaches `epsilon`.
 *
 * # Safety
 * `margin` and `passes` must be writable pointers.
 */
enum CmvStatus cmv_diophantine_margin(double omega,
                                      double epsilon,
                                      uint64_t horizon,
                                      double *margin,
                                      bool *passes);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CMV_H */
