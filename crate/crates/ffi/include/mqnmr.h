#ifndef MQNMR_H
#define MQNMR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MqnmrStatus {
  MQNMR_STATUS_OK = 0,
  MQNMR_STATUS_NULL_POINTER = 1,
  MQNMR_STATUS_INVALID_ARGUMENT = 2,
  MQNMR_STATUS_DIMENSION_MISMATCH = 3,
  MQNMR_STATUS_NUMERIC = 4,
  MQNMR_STATUS_PANIC = 5,
} MqnmrStatus;

/**
 * Opaque simulation handle.
 */
typedef struct MqnmrSimulation MqnmrSimulation;

/**
 * One pairwise coupling b_jk in rad/s.
 */
typedef struct MqnmrCoupling {
  size_t j;
  size_t k;
  double b;
} MqnmrCoupling;

/**
 * Pair entanglement at one evolution time.
 */
typedef struct MqnmrEntanglement {
  /**
   * Descending.
   */
  double lambdas[4];
  double concurrence;
  /**
   * Meaningful only when `has_witness` is set.
   */
  double witness;
  bool has_witness;
  bool entangled;
} MqnmrEntanglement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never null.
 */
const char *mqnmr_status_message(enum MqnmrStatus status);

/**
 * Message of the last failure on this thread, or null if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mqnmr_last_error(void);

/**
 * Builds an n-spin simulation from `n_couplings` couplings at inverse
 * temperature `beta`.
 *
 * # Safety
 * `couplings` must point to `n_couplings` readable entries (it may be null
 * when `n_couplings` is 0); `out` must be writable.
 */
enum MqnmrStatus mqnmr_simulation_new(size_t n_spins,
                                      const struct MqnmrCoupling *couplings,
                                      size_t n_couplings,
                                      double beta,
                                      struct MqnmrSimulation **out);

/**
 * Spin-pair simulation with coupling `b` (rad/s).
 *
 * # Safety
 * `out` must be writable.
 */
enum MqnmrStatus mqnmr_simulation_new_two_spin(double beta, double b, struct MqnmrSimulation **out);

/**
 * # Safety
 * `sim` must be null or a handle from `mqnmr_simulation_new*` that has not
 * been freed.
 */
void mqnmr_simulation_free(struct MqnmrSimulation *sim);

/**
 * Hilbert space dimension 2^n, or 0 for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
size_t mqnmr_simulation_dim(const struct MqnmrSimulation *sim);

/**
 * Writes ρ(τ) into `out` (`len >= 2 * dim * dim` doubles).
 *
 * # Safety
 * `sim` must be a live handle and `out` must hold `len` writable doubles.
 */
enum MqnmrStatus mqnmr_simulation_density(const struct MqnmrSimulation *sim,
                                          double tau,
                                          double *out,
                                          size_t len);

/**
 * Writes the coherence intensities G_k(τ) for k = -n..=n into `out`
 * (`len >= 2n + 1`), lowest order first.
 *
 * # Safety
 * `sim` must be a live handle and `out` must hold `len` writable doubles.
 */
enum MqnmrStatus mqnmr_simulation_intensities(const struct MqnmrSimulation *sim,
                                              double tau,
                                              double *out,
                                              size_t len);

/**
 * Concurrence of spins `site_a`, `site_b` at τ. The witness is set for
 * two-spin systems.
 *
 * # Safety
 * `sim` must be a live handle and `out` writable.
 */
enum MqnmrStatus mqnmr_simulation_entanglement(const struct MqnmrSimulation *sim,
                                               double tau,
                                               size_t site_a,
                                               size_t site_b,
                                               struct MqnmrEntanglement *out);

/**
 * Concurrence of an arbitrary two-spin density matrix given as 32 doubles
 * (4x4, row-major, interleaved re/im).
 *
 * # Safety
 * `rho` must point to `len` readable doubles and `out` must be writable.
 */
enum MqnmrStatus mqnmr_concurrence(const double *rho, size_t len, struct MqnmrEntanglement *out);

/**
 * β = ħω₀/(k_B T) with ω₀ in rad/s and T in kelvin.
 *
 * # Safety
 * `out` must be writable.
 */
enum MqnmrStatus mqnmr_beta_from(double omega0, double temperature, double *out);

/**
 * Entanglement onset temperature in kelvin for Larmor frequency ω₀ (rad/s).
 *
 * # Safety
 * `out` must be writable.
 */
enum MqnmrStatus mqnmr_critical_temperature(double omega0, double *out);

/**
 * Dipolar coupling in rad/s for SI geometry: γ in rad/(s·T), r in metres,
 * θ in radians.
 *
 * # Safety
 * `out` must be writable.
 */
enum MqnmrStatus mqnmr_dipolar_coupling(double gamma, double r12, double theta12, double *out);

/**
 * Closed-form pair concurrence at (β, b, τ).
 */
double mqnmr_analytic_concurrence(double beta, double b, double tau);

/**
 * Pair concurrence recovered from β and G₂ + G₋₂.
 *
 * # Safety
 * `out` must be writable.
 */
enum MqnmrStatus mqnmr_concurrence_from_coherences(double beta, double g2_plus_gm2, double *out);

/**
 * Entanglement witness; negative means entangled.
 *
 * # Safety
 * `out` must be writable.
 */
enum MqnmrStatus mqnmr_entanglement_witness(double beta, double g2_plus_gm2, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MQNMR_H */
