/* C interface to the vlab violator-space laboratory. */

#ifndef VLAB_H
#define VLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which expectation to compute.
 */
typedef enum VlabQuantity {
  /**
   * `E[|V(R)|]`
   */
  VLAB_QUANTITY_VIOLATORS = 0,
  /**
   * `E[|X(R)|]`
   */
  VLAB_QUANTITY_EXTREME = 1,
  /**
   * `E[|V_k(R)|]`
   */
  VLAB_QUANTITY_VIOLATORS_UNION = 2,
  /**
   * `E[|X_k(R)|]`
   */
  VLAB_QUANTITY_EXTREME_UNION = 3,
} VlabQuantity;

/**
 * Removal rule selector.
 */
typedef enum VlabRule {
  /**
   * k uniformly random elements (seeded)
   */
  VLAB_RULE_RANDOM = 0,
  /**
   * the k smallest constraint ids
   */
  VLAB_RULE_SMALLEST = 1,
  /**
   * the removal maximizing the violator count
   */
  VLAB_RULE_ADVERSARIAL = 2,
  /**
   * the removal minimizing the objective (needs an objective)
   */
  VLAB_RULE_OBJECTIVE_MIN = 3,
  /**
   * k elements outside a basis of the sample
   */
  VLAB_RULE_BASIS_AVOIDING = 4,
} VlabRule;

/**
 * Outcome of an FFI call. Zero is success; everything else mirrors one
 * arm of the library's error type, plus FFI-only conditions.
 */
typedef enum VlabStatus {
  VLAB_STATUS_OK = 0,
  VLAB_STATUS_CONSISTENCY_VIOLATION = 1,
  VLAB_STATUS_MODE_UNSUPPORTED = 2,
  VLAB_STATUS_BUDGET_EXCEEDED = 3,
  VLAB_STATUS_NUMERIC_INSTABILITY = 4,
  VLAB_STATUS_REGIME_UNSUPPORTED = 5,
  VLAB_STATUS_RULE_INAPPLICABLE = 6,
  VLAB_STATUS_POISONED = 7,
  VLAB_STATUS_NOT_DIMENSION_ONE = 8,
  VLAB_STATUS_LOCALITY_VIOLATION = 9,
  VLAB_STATUS_STRUCTURE_VIOLATION = 10,
  VLAB_STATUS_INVALID_INSTANCE = 11,
  /**
   * A required pointer argument was null.
   */
  VLAB_STATUS_NULL_ARGUMENT = 12,
  /**
   * A string argument was not valid UTF-8.
   */
  VLAB_STATUS_INVALID_UTF8 = 13,
  /**
   * The caller's buffer cannot hold the result; re-call with the size
   * reported through the length output.
   */
  VLAB_STATUS_BUFFER_TOO_SMALL = 14,
  /**
   * The library panicked; the handle may be in an unusable state.
   */
  VLAB_STATUS_PANIC = 15,
  /**
   * A numeric result does not fit the requested fixed-width type.
   */
  VLAB_STATUS_OVERFLOW = 16,
} VlabStatus;

/**
 * Opaque oracle handle; create with one of the `vlab_oracle_*`
 * constructors and release with [`vlab_oracle_free`].
 */
typedef struct VlabOracle VlabOracle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null after a
 * success. The pointer stays valid until the next FFI call on the same
 * thread.
 */
const char *vlab_last_error_message(void);

/**
 * Static human-readable name of a status code.
 */
const char *vlab_status_name(enum VlabStatus status);

/**
 * Build the d-smallest LP-type oracle on `n` constraints.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum VlabStatus vlab_oracle_d_smallest(uintptr_t n, uintptr_t d, struct VlabOracle **out);

/**
 * Build the smallest-number-with-repetitions oracle from `len` values.
 *
 * # Safety
 * `values` must point to `len` readable `int64_t`s; `out` must be valid.
 */
enum VlabStatus vlab_oracle_repetitions(const int64_t *values,
                                        uintptr_t len,
                                        struct VlabOracle **out);

/**
 * Build the consistent space on `m` elements where every constraint is
 * extreme in every subset.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum VlabStatus vlab_oracle_all_extreme(uintptr_t m, struct VlabOracle **out);

/**
 * Build a table-backed oracle from explicit-space JSON
 * (`{"n": ..., "entries": [{"set": [...], "violators": [...]}]}`).
 *
 * # Safety
 * `text` must be a valid NUL-terminated C string; `out` must be valid.
 */
enum VlabStatus vlab_oracle_explicit_json(const char *text, struct VlabOracle **out);

/**
 * Build the exact smallest-enclosing-ball oracle from `count` points of
 * dimension `dim`, coordinates row-major in `coords`.
 *
 * # Safety
 * `coords` must hold `count * dim` readable `int64_t`s; `out` must be
 * valid.
 */
enum VlabStatus vlab_oracle_ball_integer(uintptr_t dim,
                                         const int64_t *coords,
                                         uintptr_t count,
                                         struct VlabOracle **out);

/**
 * Build the planted random consistent space. `scan_budget` of zero picks
 * the default cap on candidate-basis scans.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum VlabStatus vlab_oracle_random_consistent(uintptr_t n,
                                              uintptr_t r,
                                              uintptr_t k,
                                              uintptr_t delta,
                                              double eps,
                                              uint64_t seed,
                                              uint64_t scan_budget,
                                              struct VlabOracle **out);

/**
 * Release a handle. Null is a no-op; anything else must have come from a
 * `vlab_oracle_*` constructor and must not be used afterwards.
 *
 * # Safety
 * See above.
 */
void vlab_oracle_free(struct VlabOracle *oracle);

/**
 * Ground set size, or 0 for a null handle.
 *
 * # Safety
 * `oracle` must be a live handle or null.
 */
uintptr_t vlab_n(const struct VlabOracle *oracle);

/**
 * `V(set)` as sorted ids. Call with `cap = 0` to learn the needed length
 * through `out_len`, then re-call with a buffer at least that large.
 *
 * # Safety
 * `oracle` must be live; `ids` must hold `len` readable ids; `out_buf`
 * must hold `cap` writable slots; `out_len` must be writable.
 */
enum VlabStatus vlab_violators(const struct VlabOracle *oracle,
                               const uint32_t *ids,
                               uintptr_t len,
                               uint32_t *out_buf,
                               uintptr_t cap,
                               uintptr_t *out_len);

/**
 * `|V(set)|`.
 *
 * # Safety
 * `oracle` must be live; `ids` must hold `len` readable ids; `out_count`
 * must be writable.
 */
enum VlabStatus vlab_violator_count(const struct VlabOracle *oracle,
                                    const uint32_t *ids,
                                    uintptr_t len,
                                    uint64_t *out_count);

/**
 * Combinatorial dimension (size of the largest basis).
 *
 * # Safety
 * `oracle` must be live; `out_dimension` must be writable.
 */
enum VlabStatus vlab_dimension(const struct VlabOracle *oracle, uintptr_t *out_dimension);

/**
 * Maximum number of distinct extreme sets reachable by removing exactly
 * `k` elements from one subset. `budget_ksubsets` of zero = default.
 *
 * # Safety
 * `oracle` must be live; `out_delta_k` must be writable.
 */
enum VlabStatus vlab_delta_k(const struct VlabOracle *oracle,
                             uintptr_t k,
                             uint64_t budget_ksubsets,
                             uintptr_t *out_delta_k);

/**
 * Exact expectation over uniform size-`r` samples, as a reduced fraction.
 * Returns `Overflow` when numerator or denominator exceeds `int64_t`;
 * `vlab_exact_expectation_string` has no such limit.
 *
 * # Safety
 * `oracle` must be live; `out_num` and `out_den` must be writable.
 */
enum VlabStatus vlab_exact_expectation(const struct VlabOracle *oracle,
                                       enum VlabQuantity quantity,
                                       uintptr_t r,
                                       uintptr_t k,
                                       uint64_t budget_ksubsets,
                                       int64_t *out_num,
                                       int64_t *out_den);

/**
 * Exact expectation as a heap-allocated `"p/q"` string; free with
 * [`vlab_string_free`].
 *
 * # Safety
 * `oracle` must be live; `out_text` must be writable.
 */
enum VlabStatus vlab_exact_expectation_string(const struct VlabOracle *oracle,
                                              enum VlabQuantity quantity,
                                              uintptr_t r,
                                              uintptr_t k,
                                              uint64_t budget_ksubsets,
                                              char **out_text);

/**
 * Monte Carlo estimate of an expectation with its standard error.
 *
 * # Safety
 * `oracle` must be live; `out_estimate` and `out_std_error` must be
 * writable.
 */
enum VlabStatus vlab_monte_carlo(const struct VlabOracle *oracle,
                                 enum VlabQuantity quantity,
                                 uintptr_t r,
                                 uintptr_t k,
                                 uint64_t trials,
                                 uint64_t seed,
                                 uint64_t budget_ksubsets,
                                 double *out_estimate,
                                 double *out_std_error);

/**
 * Apply a removal rule to `set`, writing the surviving ids (sorted).
 *
 * # Safety
 * `oracle` must be live; `ids` must hold `len` readable ids; `out_buf`
 * must hold `cap` writable slots; `out_len` must be writable.
 */
enum VlabStatus vlab_apply_rule(const struct VlabOracle *oracle,
                                enum VlabRule rule,
                                uint64_t rule_seed,
                                const uint32_t *ids,
                                uintptr_t len,
                                uintptr_t k,
                                uint64_t budget_ksubsets,
                                uint32_t *out_buf,
                                uintptr_t cap,
                                uintptr_t *out_len);

/**
 * Exact `E[|V(R ∖ K_rule)|]` over uniform `r`-samples as a reduced
 * fraction (the random rule averages over every removal choice).
 *
 * # Safety
 * `oracle` must be live; `out_num` and `out_den` must be writable.
 */
enum VlabStatus vlab_removal_expectation_exact(const struct VlabOracle *oracle,
                                               enum VlabRule rule,
                                               uint64_t rule_seed,
                                               uintptr_t r,
                                               uintptr_t k,
                                               uint64_t budget_ksubsets,
                                               int64_t *out_num,
                                               int64_t *out_den);

/**
 * Monte Carlo `E[|V(R ∖ K_rule)|]` over uniform `r`-samples.
 *
 * # Safety
 * `oracle` must be live; `out_estimate` and `out_std_error` must be
 * writable.
 */
enum VlabStatus vlab_removal_expectation_mc(const struct VlabOracle *oracle,
                                            enum VlabRule rule,
                                            uint64_t rule_seed,
                                            uintptr_t r,
                                            uintptr_t k,
                                            uint64_t trials,
                                            uint64_t seed,
                                            uint64_t budget_ksubsets,
                                            double *out_estimate,
                                            double *out_std_error);

/**
 * Verify the exact sampling identity (`k = 0`) or its removal variant
 * (`k > 0`); writes 1 into `out_holds` when the identity checks out.
 *
 * # Safety
 * `oracle` must be live; `out_holds` must be writable.
 */
enum VlabStatus vlab_check_identity(const struct VlabOracle *oracle,
                                    uintptr_t k,
                                    uint64_t budget_ksubsets,
                                    uint8_t *out_holds);

/**
 * Canonicalize a dimension-1 space into layered multiset form, returned
 * as a JSON document (`{"layers": ..., "f": ...}`); free the string with
 * [`vlab_string_free`].
 *
 * # Safety
 * `oracle` must be live; `out_text` must be writable.
 */
enum VlabStatus vlab_canonicalize_dim1_json(const struct VlabOracle *oracle, char **out_text);

/**
 * Run consistency / locality / dimension / nondegeneracy diagnostics and
 * return them as JSON; free the string with [`vlab_string_free`].
 * `sampled_trials` applies when the ground set is too large to exhaust.
 *
 * # Safety
 * `oracle` must be live; `out_text` must be writable.
 */
enum VlabStatus vlab_diagnostics_json(const struct VlabOracle *oracle,
                                      uint64_t sampled_trials,
                                      uint64_t seed,
                                      char **out_text);

/**
 * Free a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `text` must have come from a `vlab_*` function and must not be used
 * afterwards.
 */
void vlab_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VLAB_H */
