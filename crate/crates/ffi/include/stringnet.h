/* Generated by cbindgen from crates/ffi/src/lib.rs. */

#ifndef STRINGNET_H
#define STRINGNET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Eigensolver selection for [`sn_correlation_length`].
 */
typedef enum SnSolveMode {
  SN_SOLVE_MODE_AUTO = 0,
  SN_SOLVE_MODE_DENSE = 1,
  SN_SOLVE_MODE_ITERATIVE = 2,
} SnSolveMode;

/**
 * Result of every call.
 */
typedef enum SnStatus {
  SN_STATUS_OK = 0,
  SN_STATUS_NULL_POINTER = 1,
  SN_STATUS_INVALID_ARGUMENT = 2,
  SN_STATUS_DIMENSION = 3,
  SN_STATUS_PARAMETER_RANGE = 4,
  SN_STATUS_CAP_EXCEEDED = 5,
  SN_STATUS_NOT_NORMALIZED = 6,
  SN_STATUS_NOT_CONVERGED = 7,
  SN_STATUS_UNSUPPORTED = 8,
  SN_STATUS_INSUFFICIENT_DATA = 9,
  SN_STATUS_SCHEMA = 10,
  SN_STATUS_IO = 11,
  SN_STATUS_VALIDATION_FAILED = 12,
  SN_STATUS_PANIC = 13,
} SnStatus;

/**
 * Double-line tensor A.
 */
typedef struct SnDoubleLine SnDoubleLine;

/**
 * Two-site stochastic rule.
 */
typedef struct SnRule SnRule;

/**
 * Single-line tensor W.
 */
typedef struct SnSingleLine SnSingleLine;

/**
 * Parameters of [`sn_time_correlator`].
 */
typedef struct SnCorrelatorSpec {
  int64_t k;
  size_t width;
  size_t r_max;
  size_t t0;
  uint64_t samples;
  uint64_t seed;
  /**
   * Start from a corner instead of a full row.
   */
  bool corner;
} SnCorrelatorSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, empty after a success. The
 * pointer stays valid until the next call on the same thread.
 */
const char *sn_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sn_version(void);

/**
 * Whether the named path produces double-line tensors.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum SnStatus sn_path_is_double_line(const char *name, bool *out_flag);

/**
 * Evaluates a single-line path at `g`. `modulus` 0 selects the path default.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out_tensor` must be writable.
 */
enum SnStatus sn_path_single_line(const char *name,
                                  size_t modulus,
                                  double g,
                                  struct SnSingleLine **out_tensor);

/**
 * Evaluates a double-line path at `g`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out_tensor` must be writable.
 */
enum SnStatus sn_path_double_line(const char *name, double g, struct SnDoubleLine **out_tensor);

/**
 * Builds a single-line tensor from N⁴ entries indexed ((a·N+b)·N+c)·N+d.
 *
 * # Safety
 * `re` and `im` must point to `len` readable doubles; `out_tensor` must be writable.
 */
enum SnStatus sn_single_line_from_entries(size_t modulus,
                                          const double *re,
                                          const double *im,
                                          size_t len,
                                          struct SnSingleLine **out_tensor);

/**
 * Modulus N of a single-line tensor, 0 for a null handle.
 *
 * # Safety
 * `tensor` must be null or a live handle.
 */
size_t sn_single_line_modulus(const struct SnSingleLine *tensor);

/**
 * Copies the N⁴ entries of a single-line tensor into `re`/`im`.
 *
 * # Safety
 * `tensor` must be a live handle; `re` and `im` must hold `len` doubles.
 */
enum SnStatus sn_single_line_entries(const struct SnSingleLine *tensor,
                                     double *re,
                                     double *im,
                                     size_t len);

/**
 * Largest deviation of a row norm from 1.
 *
 * # Safety
 * `tensor` must be a live handle; `out_residual` must be writable.
 */
enum SnStatus sn_single_line_isometry_residual(const struct SnSingleLine *tensor,
                                               double *out_residual);

/**
 * Releases a single-line tensor. Null is ignored.
 *
 * # Safety
 * `tensor` must be null or a handle not yet freed.
 */
void sn_single_line_free(struct SnSingleLine *tensor);

/**
 * Modulus N of a double-line tensor, 0 for a null handle.
 *
 * # Safety
 * `tensor` must be null or a live handle.
 */
size_t sn_double_line_modulus(const struct SnDoubleLine *tensor);

/**
 * Copies the entries of a double-line tensor into `re`/`im`; `len` must equal
 * the tensor's entry count.
 *
 * # Safety
 * `tensor` must be a live handle; `re` and `im` must hold `len` doubles.
 */
enum SnStatus sn_double_line_entries(const struct SnDoubleLine *tensor,
                                     double *re,
                                     double *im,
                                     size_t len);

/**
 * Number of entries of a double-line tensor, 0 for a null handle.
 *
 * # Safety
 * `tensor` must be null or a live handle.
 */
size_t sn_double_line_len(const struct SnDoubleLine *tensor);

/**
 * Largest deviation of a row norm from 1.
 *
 * # Safety
 * `tensor` must be a live handle; `out_residual` must be writable.
 */
enum SnStatus sn_double_line_isometry_residual(const struct SnDoubleLine *tensor,
                                               double *out_residual);

/**
 * Reduces a double-line tensor to the single-line tensor with the same diagonal
 * statistics.
 *
 * # Safety
 * `tensor` must be a live handle; `out_tensor` must be writable.
 */
enum SnStatus sn_double_line_reduce(const struct SnDoubleLine *tensor,
                                    struct SnSingleLine **out_tensor);

/**
 * Releases a double-line tensor. Null is ignored.
 *
 * # Safety
 * `tensor` must be null or a handle not yet freed.
 */
void sn_double_line_free(struct SnDoubleLine *tensor);

/**
 * Stochastic rule with probabilities |W|².
 *
 * # Safety
 * `tensor` must be a live handle; `out_rule` must be writable.
 */
enum SnStatus sn_rule_from_single_line(const struct SnSingleLine *tensor, struct SnRule **out_rule);

/**
 * Named rule: WQ, WP, DS, TC<N>, Z<N> or Z<N>F.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out_rule` must be writable.
 */
enum SnStatus sn_rule_named(const char *name, struct SnRule **out_rule);

/**
 * Releases a rule. Null is ignored.
 *
 * # Safety
 * `rule` must be null or a handle not yet freed.
 */
void sn_rule_free(struct SnRule *rule);

/**
 * Within-sector gap |η₂| and ξ = −1/ln|η₂| of the ring transfer operator.
 *
 * # Safety
 * `rule` must be a live handle; output pointers must be writable.
 */
enum SnStatus sn_correlation_length(const struct SnRule *rule,
                                    size_t ring_width,
                                    enum SnSolveMode mode,
                                    double *out_eta2_abs,
                                    double *out_xi);

/**
 * Full spectral summary as a JSON string, released with [`sn_string_free`].
 *
 * # Safety
 * `rule` must be a live handle; `out_json` must be writable.
 */
enum SnStatus sn_transfer_spectrum_json(const struct SnRule *rule,
                                        size_t ring_width,
                                        enum SnSolveMode mode,
                                        char **out_json);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void sn_string_free(char *s);

/**
 * Site-averaged time correlator C(r), r = 1..=r_max, from the uniform product
 * boundary laid out as a row or a corner. Each output buffer holds `spec.r_max` values.
 *
 * # Safety
 * `rule` must be a live handle; buffers must hold `len` doubles.
 */
enum SnStatus sn_time_correlator(const struct SnRule *rule,
                                 struct SnCorrelatorSpec spec,
                                 double *out_re,
                                 double *out_im,
                                 double *out_standard_error,
                                 size_t len);

/**
 * Power-law fit |C(r)| ≈ A·r^α of values at r = 1..=len. `r_min` and `r_max` of
 * 0 select the default window [4, len/2].
 *
 * # Safety
 * Input buffers must hold `len` doubles; output pointers must be writable.
 */
enum SnStatus sn_fit_power_law(const double *re,
                               const double *im,
                               const double *standard_error,
                               size_t len,
                               size_t r_min,
                               size_t r_max,
                               double *out_exponent,
                               double *out_exponent_error);

/**
 * Runs an experiment from a JSON run config, as the command-line `run --config`
 * does. A validation failure returns `SN_STATUS_VALIDATION_FAILED`.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `out_rows` may be null.
 */
enum SnStatus sn_run_experiment_json(const char *config_json, size_t *out_rows);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRINGNET_H */
