#ifndef NC_SPECTRA_H
#define NC_SPECTRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every entry point.
 */
typedef enum NcsStatus {
  NCS_STATUS_OK = 0,
  NCS_STATUS_NULL_POINTER = 1,
  NCS_STATUS_INVALID_PARAMS = 2,
  NCS_STATUS_NO_TERMINATION_ROOT = 3,
  NCS_STATUS_DIVERGENT = 4,
  NCS_STATUS_NON_CONVERGENCE = 5,
  NCS_STATUS_INVALID_ARGUMENT = 6,
  NCS_STATUS_BUFFER_TOO_SMALL = 7,
  NCS_STATUS_EIGENSOLVER = 8,
  NCS_STATUS_INTERNAL = 99,
} NcsStatus;

typedef enum NcsVariant {
  NCS_VARIANT_CANONICAL = 0,
  NCS_VARIANT_COMPLEX = 1,
} NcsVariant;

typedef enum NcsBranch {
  /**
   * Canonical variant.
   */
  NCS_BRANCH_NONE = 0,
  NCS_BRANCH_UP = 1,
  NCS_BRANCH_DOWN = 2,
} NcsBranch;

typedef enum NcsShiftMode {
  NCS_SHIFT_MODE_QUADRATURE = 0,
  NCS_SHIFT_MODE_COMPLETED_SQUARE = 1,
  /**
   * Literal closed forms, constant a-term and oscillator energy.
   */
  NCS_SHIFT_MODE_PAPER_LITERAL = 2,
} NcsShiftMode;

/**
 * Opaque finite-difference oracle result.
 */
typedef struct NcsOracle NcsOracle;

/**
 * Opaque quasi-exact series solution.
 */
typedef struct NcsSolution NcsSolution;

typedef struct NcsParams {
  double a;
  double b;
  double c;
} NcsParams;

typedef struct NcsLevel {
  double commutative;
  double zeroth;
  double first_order_shift;
  double total;
} NcsLevel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the next failing call.
 */
const char *ncs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ncs_version(void);

/**
 * Solves the quasi-exact state `(n, m)` and stores a new handle in `out`.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum NcsStatus ncs_solve_quasi_exact(struct NcsParams p,
                                     uint32_t n,
                                     uint32_t m,
                                     struct NcsSolution **out);

/**
 * # Safety
 * `sol` must be null or a handle from `ncs_solve_quasi_exact` not yet freed.
 */
void ncs_solution_free(struct NcsSolution *sol);

/**
 * Termination-derived energy.
 *
 * # Safety
 * `sol` must be a live handle, `out` valid for one write.
 */
enum NcsStatus ncs_solution_energy(const struct NcsSolution *sol, double *out);

/**
 * The oscillator formula `2√b(1+m+n)`.
 *
 * # Safety
 * `sol` must be a live handle, `out` valid for one write.
 */
enum NcsStatus ncs_solution_paper_energy(const struct NcsSolution *sol, double *out);

/**
 * Residual of the termination condition at the given `c` (0 when it holds).
 *
 * # Safety
 * `sol` must be a live handle, `out` valid for one write.
 */
enum NcsStatus ncs_solution_constraint_residual(const struct NcsSolution *sol, double *out);

/**
 * Normalised polynomial coefficients `a_0..a_n`.
 *
 * # Safety
 * `sol` must be a live handle; `buf` valid for `cap` writes; `len` for one.
 */
enum NcsStatus ncs_solution_coeffs(const struct NcsSolution *sol,
                                   double *buf,
                                   size_t cap,
                                   size_t *len);

/**
 * Radial function `R(r)`.
 *
 * # Safety
 * `sol` must be a live handle, `out` valid for one write.
 */
enum NcsStatus ncs_solution_evaluate(const struct NcsSolution *sol, double r, double *out);

/**
 * Admissible Coulomb coefficients for `(n, m)` in ascending order, plus the energy.
 *
 * # Safety
 * `buf` valid for `cap` writes; `len` and `energy` for one write each (`energy` may be null).
 */
enum NcsStatus ncs_termination_roots(double a,
                                     double b,
                                     uint32_t n,
                                     uint32_t m,
                                     double *buf,
                                     size_t cap,
                                     size_t *len,
                                     double *energy);

/**
 * `Γ(s, x)` for integer `s ≥ 1` and any real `x`.
 *
 * # Safety
 * `out` valid for one write.
 */
enum NcsStatus ncs_upper_incomplete_gamma_int(double s, double x, double *out);

/**
 * Noncommutative level `(n, m, branch)` at `theta`.
 *
 * # Safety
 * `out` valid for one write.
 */
enum NcsStatus ncs_nc_level(struct NcsParams p,
                            enum NcsVariant variant,
                            double theta,
                            uint32_t n,
                            uint32_t m,
                            enum NcsBranch branch,
                            enum NcsShiftMode mode,
                            struct NcsLevel *out);

/**
 * Lowest `k` finite-difference levels for magnetic number `m`.
 *
 * `points = 0` and `r_max ≤ 0` select the defaults.
 *
 * # Safety
 * `out` valid for one pointer write.
 */
enum NcsStatus ncs_oracle_solve(struct NcsParams p,
                                uint32_t m,
                                size_t points,
                                double r_max,
                                size_t k,
                                struct NcsOracle **out);

/**
 * # Safety
 * `oracle` must be null or a handle from `ncs_oracle_solve` not yet freed.
 */
void ncs_oracle_free(struct NcsOracle *oracle);

/**
 * # Safety
 * `oracle` must be a live handle, `out` valid for one write.
 */
enum NcsStatus ncs_oracle_eigenvalue(const struct NcsOracle *oracle, size_t index, double *out);

/**
 * Whether halving the grid spacing left every level within tolerance.
 *
 * # Safety
 * `oracle` must be a live handle, `out` valid for one write.
 */
enum NcsStatus ncs_oracle_converged(const struct NcsOracle *oracle, bool *out);

/**
 * `⟨r^power⟩` for the oracle state `index`.
 *
 * # Safety
 * `oracle` must be a live handle, `out` valid for one write.
 */
enum NcsStatus ncs_oracle_expectation(const struct NcsOracle *oracle,
                                      size_t index,
                                      int32_t power,
                                      double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NC_SPECTRA_H */
