#ifndef CFDUPLEX_H
#define CFDUPLEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfdStatus {
  CFD_STATUS_OK = 0,
  CFD_STATUS_INVALID_ARGUMENT = 1,
  CFD_STATUS_NULL_POINTER = 2,
  CFD_STATUS_UNAVAILABLE = 3,
  CFD_STATUS_INTERNAL = 4,
} CfdStatus;

typedef enum CfdMode {
  CFD_MODE_ANALYTIC = 0,
  CFD_MODE_CYCLE = 1,
} CfdMode;

typedef enum CfdLossCause {
  CFD_LOSS_CAUSE_ABSORBED_BY_AO = 0,
  CFD_LOSS_CAUSE_DISCARDED_AT_DETECTOR = 1,
  CFD_LOSS_CAUSE_REDIRECTED_NONCOUNTERFACTUAL = 2,
} CfdLossCause;

/**
 * Opaque protocol result.
 */
typedef struct CfdOutcome CfdOutcome;

typedef struct CfdTelexOptimum {
  uint32_t m_star;
  uint32_t k_star;
  double zeta_q;
  double q;
} CfdTelexOptimum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cfd_version(void);

/**
 * Message for the last failed call on this thread; empty if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *cfd_last_error(void);

/**
 * `cos^{2M}(π/2M)`.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum CfdStatus cfd_lambda0(uint32_t m, double *out);

/**
 * CQZ herald with the object present.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum CfdStatus cfd_lambda1(uint32_t m, uint32_t n, double *out);

/**
 * Per-cycle duplex success factor.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum CfdStatus cfd_lambda2(uint32_t n, uint32_t k, double *out);

/**
 * DCQZ entangling herald.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum CfdStatus cfd_lambda3(double alpha_sq, uint32_t m, uint32_t n, double *out);

/**
 * Per-cycle DMQZ success factor.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum CfdStatus cfd_lambda4(double delta1, uint32_t n, uint32_t k, double *out);

/**
 * Duplex efficiency `λ₂^K`.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum CfdStatus cfd_zeta_c(uint32_t n, uint32_t k, double *out);

/**
 * Telex efficiency `λ₃ λ₄^K`.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum CfdStatus cfd_zeta_q(double alpha_sq,
                          double gamma_sq,
                          uint32_t m,
                          uint32_t n,
                          uint32_t k,
                          double *out);

/**
 * Duplex capacity in bits per Bell pair.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum CfdStatus cfd_duplex_capacity(uint32_t n, uint32_t k, double *out);

/**
 * Telex quantum capacity `2·max(0, 2ζ − 1)`.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum CfdStatus cfd_telex_capacity(double zeta, double *out);

/**
 * Asymmetric erasure-channel capacity and optimal input probability.
 *
 * # Safety
 * `capacity` and `p_star` must be null or point to writable `double`s.
 */
enum CfdStatus cfd_bec_capacity(double lambda0, double lambda1, double *capacity, double *p_star);

/**
 * Optimal duplex `K` for fixed `N` and the resulting capacity.
 *
 * # Safety
 * `k_star` and `capacity` must be null or point to writable storage.
 */
enum CfdStatus cfd_optimize_duplex_k(uint32_t n, uint32_t *k_star, double *capacity);

/**
 * Telex `(M★, K★)` search over `[1, 4N]`; `joint != 0` scans the full grid.
 *
 * # Safety
 * `out` must be null or point to a writable `CfdTelexOptimum`.
 */
enum CfdStatus cfd_optimize_telex(uint32_t n,
                                  double alpha_sq,
                                  double gamma_sq,
                                  int32_t joint,
                                  struct CfdTelexOptimum *out);

/**
 * Runs duplex coding for bits `(b1, b2)`. With `use_seed == 0` the most likely
 * decode outcome is reported; otherwise measurements are sampled from `seed`.
 *
 * # Safety
 * `out` must be null or point to writable storage for a handle pointer.
 */
enum CfdStatus cfd_duplex_run(uint8_t b1,
                              uint8_t b2,
                              uint32_t n,
                              uint32_t k,
                              enum CfdMode run_mode,
                              int32_t use_seed,
                              uint64_t seed,
                              struct CfdOutcome **out);

/**
 * Runs telexchange of `eta1` (Alice) and `eta2` (Bob), each given as four
 * doubles `[a.re, a.im, b.re, b.im]`. `mu` of 0 or 1 forces the
 * announcement; any other value samples it from `seed`.
 *
 * # Safety
 * `eta1` and `eta2` must point to four readable doubles each; `out` must be
 * null or point to writable storage for a handle pointer.
 */
enum CfdStatus cfd_telex_run(const double *eta1,
                             const double *eta2,
                             uint32_t m,
                             uint32_t n,
                             uint32_t k,
                             enum CfdMode run_mode,
                             int32_t mu,
                             uint64_t seed,
                             struct CfdOutcome **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `o` must be null or a handle from this library that has not been freed.
 */
void cfd_outcome_free(struct CfdOutcome *o);

/**
 * Writes 1 for a decoded run, 0 for an erasure.
 *
 * # Safety
 * `o` must be null or a live handle; `decoded` null or writable.
 */
enum CfdStatus cfd_outcome_decoded(const struct CfdOutcome *o, int32_t *decoded);

/**
 * Heralded success probability and its closed-form counterpart.
 *
 * # Safety
 * `o` must be null or a live handle; outputs null or writable.
 */
enum CfdStatus cfd_outcome_herald(const struct CfdOutcome *o, double *herald, double *closed_form);

/**
 * Decoded duplex bits; `CFD_STATUS_UNAVAILABLE` for telex runs or erasures.
 *
 * # Safety
 * `o` must be null or a live handle; outputs null or writable.
 */
enum CfdStatus cfd_outcome_bits(const struct CfdOutcome *o, uint8_t *b1, uint8_t *b2);

/**
 * Telex fidelities of Alice's output with `eta2` and Bob's with `eta1`.
 *
 * # Safety
 * `o` must be null or a live handle; outputs null or writable.
 */
enum CfdStatus cfd_outcome_fidelities(const struct CfdOutcome *o, double *alice, double *bob);

/**
 * Telex announcement bit.
 *
 * # Safety
 * `o` must be null or a live handle; `mu` null or writable.
 */
enum CfdStatus cfd_outcome_announcement(const struct CfdOutcome *o, uint8_t *mu);

/**
 * Probability booked to one loss cause.
 *
 * # Safety
 * `o` must be null or a live handle; `out` null or writable.
 */
enum CfdStatus cfd_outcome_loss(const struct CfdOutcome *o, enum CfdLossCause cause, double *out);

/**
 * Copies the last error into `buf` (NUL-terminated, truncated to `len`).
 * Returns the full message length excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t cfd_last_error_copy(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CFDUPLEX_H */
