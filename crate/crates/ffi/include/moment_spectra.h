#ifndef MOMENT_SPECTRA_H
#define MOMENT_SPECTRA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_INPUT = 2,
  MS_STATUS_INSUFFICIENT_ORDER = 3,
  MS_STATUS_SINGULAR_PIVOT = 4,
  MS_STATUS_INSUFFICIENT_PRECISION = 5,
  MS_STATUS_INCONSISTENT = 6,
  MS_STATUS_NOT_CONVERGED = 7,
  MS_STATUS_INTERNAL = 8,
  MS_STATUS_OVERFLOW = 9,
  MS_STATUS_OUT_OF_RANGE = 10,
  MS_STATUS_PANIC = 11,
} MsStatus;

/**
 * Truncated-basis eigenvalues of (p² + q²)/2 + εq⁴.
 */
typedef struct MsOracle MsOracle;

/**
 * ε-series of one anharmonic level.
 */
typedef struct MsPerturbed MsPerturbed;

/**
 * Harmonic spectrum certified from determinant positivity.
 */
typedef struct MsSpectrum MsSpectrum;

typedef struct MsRational {
  int64_t num;
  int64_t den;
} MsRational;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call into the library on the same thread; do not free.
 */
const char *ms_last_error_message(void);

/**
 * Library version, static storage.
 */
const char *ms_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ms_string_free(char *s);

/**
 * Runs a CLI subcommand given as argv (without the program name) and
 * returns its JSON document.
 *
 * # Safety
 * `argv` must hold `argc` valid NUL-terminated strings; `out_json` must be writable.
 */
enum MsStatus ms_run_json(uintptr_t argc, const char *const *argv, char **out_json);

/**
 * Certifies harmonic eigenvalues λ̂ (units of ħ) from d_1 … d_{max_blocks}.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_harmonic_spectrum(uint32_t max_blocks, struct MsSpectrum **out);

/**
 * # Safety
 * `h` must be a live handle; `out` writable.
 */
enum MsStatus ms_spectrum_certified_count(const struct MsSpectrum *h, uintptr_t *out);

/**
 * Certified eigenvalue `i`; `MS_STATUS_INSUFFICIENT_PRECISION` if it is irrational.
 *
 * # Safety
 * `h` must be a live handle; `out` writable.
 */
enum MsStatus ms_spectrum_certified(const struct MsSpectrum *h,
                                    uintptr_t i,
                                    struct MsRational *out);

/**
 * Resolution bound (the first unresolved node).
 *
 * # Safety
 * `h` must be a live handle; `out` writable.
 */
enum MsStatus ms_spectrum_tail(const struct MsSpectrum *h, struct MsRational *out);

/**
 * # Safety
 * `h` must be a live handle; `out_json` writable.
 */
enum MsStatus ms_spectrum_json(const struct MsSpectrum *h, char **out_json);

/**
 * # Safety
 * `h` must be NULL or a live handle, not used afterwards.
 */
void ms_spectrum_free(struct MsSpectrum *h);

/**
 * λ_(0) … λ_(k_max) for `level`, with the default pinching limits.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_perturbed_eigenvalue(uint32_t level, uint32_t k_max, struct MsPerturbed **out);

/**
 * Number of coefficients pinned (fewer than k_max + 1 if an order stayed open).
 *
 * # Safety
 * `h` must be a live handle; `out` writable.
 */
enum MsStatus ms_perturbed_count(const struct MsPerturbed *h, uintptr_t *out);

/**
 * # Safety
 * `h` must be a live handle; `out` writable.
 */
enum MsStatus ms_perturbed_coefficient(const struct MsPerturbed *h,
                                       uintptr_t k,
                                       struct MsRational *out);

/**
 * # Safety
 * `h` must be a live handle; `out_json` writable.
 */
enum MsStatus ms_perturbed_json(const struct MsPerturbed *h, char **out_json);

/**
 * # Safety
 * `h` must be NULL or a live handle, not used afterwards.
 */
void ms_perturbed_free(struct MsPerturbed *h);

/**
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_oracle_diagonalize(double epsilon, uintptr_t dim, struct MsOracle **out);

/**
 * # Safety
 * `h` must be a live handle; `out` writable.
 */
enum MsStatus ms_oracle_count(const struct MsOracle *h, uintptr_t *out);

/**
 * # Safety
 * `h` must be a live handle; `out` writable.
 */
enum MsStatus ms_oracle_eigenvalue(const struct MsOracle *h, uintptr_t i, double *out);

/**
 * Whether the low eigenvalues were stable under a 25% larger basis.
 *
 * # Safety
 * `h` must be a live handle; `out` writable.
 */
enum MsStatus ms_oracle_converged(const struct MsOracle *h, bool *out);

/**
 * # Safety
 * `h` must be NULL or a live handle, not used afterwards.
 */
void ms_oracle_free(struct MsOracle *h);

/**
 * Both fermion eigenvalues, lowest first, written to `out[0..2]`.
 *
 * # Safety
 * `out` must point to two writable `MsRational`s.
 */
enum MsStatus ms_fermion_eigenvalues(struct MsRational omega,
                                     struct MsRational hbar,
                                     struct MsRational *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOMENT_SPECTRA_H */
