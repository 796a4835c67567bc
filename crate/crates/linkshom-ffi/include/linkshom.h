#ifndef LINKSHOM_H
#define LINKSHOM_H

/* Generated by cbindgen from linkshom-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum LhStatus {
  LhStatus_Ok = 0,
  LhStatus_NullPointer = 1,
  LhStatus_InvalidArgument = 2,
  LhStatus_InternalInvariant = 3,
  LhStatus_Panic = 4,
} LhStatus;

/**
 * Opaque Betti table handle.
 */
typedef struct LhBettiTable LhBettiTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Engine version as a static string; do not free.
 */
const char *lh_version(void);

/**
 * Computes a Betti table. `p_max < 0` means "no explicit level bound"
 * (valid for circles only); `exact != 0` escalates ranks to the exact
 * elimination. The handle must be released with `lh_betti_free`.
 */
enum LhStatus lh_betti_compute(uint32_t m,
                               uint32_t n,
                               uint32_t d,
                               uint32_t u_max,
                               int64_t p_max,
                               int exact,
                               uint64_t seed,
                               struct LhBettiTable **out);

/**
 * Number of entries (total degrees 0..=u_max) in the table.
 */
enum LhStatus lh_betti_entry_count(const struct LhBettiTable *table, uintptr_t *out);

/**
 * Reads entry `index`: total degree, Betti number, completeness flag.
 */
enum LhStatus lh_betti_entry(const struct LhBettiTable *table,
                             uintptr_t index,
                             uint32_t *out_u,
                             uint64_t *out_betti,
                             int *out_complete);

/**
 * Renders the table as JSON; free the string with `lh_string_free`.
 */
enum LhStatus lh_betti_to_json(const struct LhBettiTable *table, char **out);

void lh_betti_free(struct LhBettiTable *table);

/**
 * Closed-form alternating-sum series of the link tower as JSON.
 */
enum LhStatus lh_euler_links_json(uint32_t m, uint32_t d, uint32_t order, char **out);

/**
 * Series of the pair (links modulo m knots) as JSON.
 */
enum LhStatus lh_euler_pair_json(uint32_t m, uint32_t d, uint32_t order, char **out);

/**
 * Alternating-sum consistency report (computed dimensions vs the closed
 * form) as JSON.
 */
enum LhStatus lh_euler_check_json(uint32_t m,
                                  uint32_t d,
                                  uint32_t t_max,
                                  uint64_t seed,
                                  char **out);

/**
 * Radius-of-convergence upper bounds: `(1/m)^{1/(d-1)}` from the link
 * tower and `(1/sqrt(2))^{1/(d-1)}` from the knot tower.
 */
enum LhStatus lh_radius(uint32_t m, uint32_t d, double *out_link_bound, double *out_knot_bound);

/**
 * Frees a string returned by this library.
 */
void lh_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINKSHOM_H */
