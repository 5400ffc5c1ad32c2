#ifndef TSE_H
#define TSE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum tse_status {
  TSE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TSE_STATUS_NULL_ARGUMENT = 1,
  /**
   * Invalid input: parse, configuration or validation failure.
   */
  TSE_STATUS_INVALID = 2,
  /**
   * Numerical failure (blow-up, non-convergence, statistics).
   */
  TSE_STATUS_NUMERICAL = 3,
  /**
   * Scenario ran but at least one embedded check failed.
   */
  TSE_STATUS_CHECK_FAILED = 4,
  TSE_STATUS_IO = 5,
  /**
   * Requested key is absent or has another type.
   */
  TSE_STATUS_NOT_FOUND = 6,
  TSE_STATUS_PANIC = 7,
} tse_status;

/**
 * Result of running a scenario.
 */
typedef struct tse_report tse_report;

/**
 * Parsed scenario.
 */
typedef struct tse_scenario tse_scenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *tse_last_error(void);

/**
 * Static, NUL-terminated library version.
 */
const char *tse_version(void);

/**
 * Critical bias κ_c(μ) of the biased rock–paper–scissors family.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum tse_status tse_hopf_curve(double mu, double *out_kappa);

/**
 * First Lyapunov coefficient ℓ₁(μ).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum tse_status tse_first_lyapunov_coefficient(double mu, double *out_l1);

/**
 * Spectral radius of a nonnegative `n × n` row-major matrix.
 *
 * # Safety
 * `data` must point to `n * n` doubles; `out_rho` must be valid.
 */
enum tse_status tse_spectral_radius(const double *data, size_t n, double *out_rho);

/**
 * Slack budget of a list of extension costs θ_k.
 *
 * # Safety
 * `thetas` must point to `len` doubles; every out pointer must be valid.
 */
enum tse_status tse_slack_budget(const double *thetas,
                                 size_t len,
                                 double sigma0,
                                 double sigma_min,
                                 double *out_total,
                                 double *out_budget,
                                 double *out_remaining,
                                 bool *out_safe);

/**
 * Tipping index `T = S / (1 − ρS)`.
 *
 * # Safety
 * `out_t` must be valid.
 */
enum tse_status tse_tipping_index(double slope, double rho, double *out_t);

/**
 * Protection bits `W / σ`.
 *
 * # Safety
 * `out_bits` must be valid.
 */
enum tse_status tse_protection_bits(double barrier, double sigma, double *out_bits);

/**
 * Parses scenario text. Free the handle with [`tse_scenario_free`].
 *
 * # Safety
 * `toml_text` must be a NUL-terminated string; `out_scenario` must be valid.
 */
enum tse_status tse_scenario_parse(const char *toml_text, struct tse_scenario **out_scenario);

/**
 * Loads a bundled golden scenario by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out_scenario` must be valid.
 */
enum tse_status tse_scenario_golden(const char *name, struct tse_scenario **out_scenario);

/**
 * # Safety
 * `scenario` must come from this library and not be freed twice.
 */
void tse_scenario_free(struct tse_scenario *scenario);

/**
 * Runs a scenario. `use_seed` selects `seed` over the scenario's own seed.
 *
 * # Safety
 * `scenario` must be a live handle; `out_report` must be valid.
 */
enum tse_status tse_scenario_run(const struct tse_scenario *scenario,
                                 bool use_seed,
                                 uint64_t seed,
                                 struct tse_report **out_report);

/**
 * Evaluates the scenario's embedded checks against a report. Returns
 * `TSE_STATUS_CHECK_FAILED` with the failing keys in the last-error message when
 * any check fails.
 *
 * # Safety
 * Both handles must be live.
 */
enum tse_status tse_scenario_check(const struct tse_scenario *scenario,
                                   const struct tse_report *report);

/**
 * # Safety
 * `report` must come from this library and not be freed twice.
 */
void tse_report_free(struct tse_report *report);

/**
 * One-line summary; owned by the report.
 *
 * # Safety
 * `report` must be live.
 */
const char *tse_report_summary(const struct tse_report *report);

/**
 * Number of key–value entries.
 *
 * # Safety
 * `report` must be live or null.
 */
size_t tse_report_len(const struct tse_report *report);

/**
 * Key of entry `i`, or null when out of range; owned by the report.
 *
 * # Safety
 * `report` must be live or null.
 */
const char *tse_report_key(const struct tse_report *report, size_t i);

/**
 * Numeric value of `key` (integers and booleans convert to double).
 *
 * # Safety
 * `report` must be live, `key` NUL-terminated, `out_value` valid.
 */
enum tse_status tse_report_number(const struct tse_report *report,
                                  const char *key,
                                  double *out_value);

/**
 * Text value of `key`; the string is owned by the report.
 *
 * # Safety
 * `report` must be live, `key` NUL-terminated, `out_text` valid.
 */
enum tse_status tse_report_text(const struct tse_report *report,
                                const char *key,
                                const char **out_text);

/**
 * Writes `report.txt` and the report's CSV artifacts into `dir`.
 *
 * # Safety
 * `report` must be live and `dir` NUL-terminated.
 */
enum tse_status tse_report_write(const struct tse_report *report, const char *dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TSE_H */
