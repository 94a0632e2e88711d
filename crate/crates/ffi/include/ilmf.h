#ifndef ILMF_H
#define ILMF_H

/* Generated by cbindgen from the ilmf-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IlmfStatus {
  ILMF_STATUS_OK = 0,
  ILMF_STATUS_EVAL_ERROR = 1,
  ILMF_STATUS_INVALID_INPUT = 2,
} IlmfStatus;

/**
 * Opaque series-evaluation policy handle.
 */
typedef struct IlmfPolicy IlmfPolicy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Allocate a policy with default settings.  Release with
 * [`ilmf_policy_free`].
 */
struct IlmfPolicy *ilmf_policy_new(void);

/**
 * Cap the per-index summation order; the total-order cap is raised to at
 * least the same value.  A null handle is ignored.
 */
void ilmf_policy_set_max_order(struct IlmfPolicy *policy, size_t max_order);

/**
 * Set the relative tail threshold that ends shell summation.  Non-finite
 * or non-positive values and null handles are ignored.
 */
void ilmf_policy_set_tail_tol(struct IlmfPolicy *policy, double tail_tol);

void ilmf_policy_free(struct IlmfPolicy *policy);

/**
 * Release a string returned by this library.  Null is a no-op.
 */
void ilmf_string_free(char *s);

/**
 * Evaluate one function from a JSON parameter set via the series engine.
 *
 * `policy` may be null for defaults.  On Ok the out string is the
 * evaluation JSON (value matrix plus convergence diagnostics).
 */
enum IlmfStatus ilmf_eval_json(const char *params_json,
                               const struct IlmfPolicy *policy,
                               char **out);

/**
 * Run the identity verification suite.
 *
 * `config_json` may be null for the default configuration; otherwise it is
 * a JSON `VerifyConfig`.  On Ok the out string is the full report JSON;
 * the status stays Ok even when identities fail, since the report itself
 * carries `all_passed`.
 */
enum IlmfStatus ilmf_verify_json(const char *config_json, uint64_t seed, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ILMF_H */
