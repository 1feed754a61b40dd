/* C interface to the haarlab workbench. All functions return HlStatus; query hl_last_error_message() after a failure. */

#ifndef HAARLAB_H
#define HAARLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum HlStatus {
  HL_STATUS_OK = 0,
  HL_STATUS_NULL_POINTER = 1,
  HL_STATUS_INVALID_ARGUMENT = 2,
  HL_STATUS_OUT_OF_RANGE = 3,
  HL_STATUS_NUMERICAL = 4,
  HL_STATUS_PARSE_ERROR = 5,
  HL_STATUS_NOT_A_GROUP = 6,
  HL_STATUS_COST_CAP = 7,
  HL_STATUS_INTERNAL = 8,
} HlStatus;

/**
 * Opaque exact character table of a finite group.
 */
typedef struct HlCharTable HlCharTable;

/**
 * Opaque Haar sampler over a chart.
 */
typedef struct HlSampler HlSampler;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *hl_last_error_message(void);

/**
 * Closed-form total volume of SO(n) under ds² = ∑ dr².
 */
enum HlStatus hl_so_total_volume(uint32_t n, double *out);

/**
 * Closed-form chart-box volume of SU(n) under ds² = ∑ dc dc̄.
 */
enum HlStatus hl_su_total_volume(uint32_t n, double *out);

/**
 * Tensor-product quadrature of the invariant density over the chart box.
 *
 * `group` is `so:N` or `su:N`; `chart` is `hurwitz`, `alt`, or NULL for the
 * default.
 */
enum HlStatus hl_volume_quadrature(const char *group,
                                   const char *chart,
                                   uint32_t nodes,
                                   double *out);

/**
 * Normalized Haar integral of (tr g)^power by full-chart quadrature.
 */
enum HlStatus hl_integrate_trace_power(const char *group,
                                       uint32_t power,
                                       uint32_t nodes,
                                       double *out_re,
                                       double *out_im);

/**
 * (1/|W|) ∫ (tr h)^power |D(h)|² dh over the Cartan torus of SO(n).
 */
enum HlStatus hl_weyl_integrate_trace_power(uint32_t n,
                                            uint32_t power,
                                            uint32_t torus_nodes,
                                            double *out_re,
                                            double *out_im);

/**
 * Order of the Weyl group of SO(n) by the calibration integral.
 */
enum HlStatus hl_weyl_group_order(uint32_t n, uint32_t torus_nodes, uint64_t *out);

/**
 * Number of degree-`degree` invariants in the coefficients of a
 * degree-`form_degree` form under the group of `group`.
 */
enum HlStatus hl_invariant_dimension(const char *group,
                                     uint32_t form_degree,
                                     uint32_t degree,
                                     uint32_t nodes,
                                     int64_t *out);

/**
 * Create a sampler; `chart` may be NULL for the Hurwitz chart. Identical
 * seeds give identical streams.
 */
enum HlStatus hl_sampler_new(const char *group,
                             const char *chart,
                             uint64_t seed,
                             struct HlSampler **out);

/**
 * Matrix dimension n of the sampled group.
 */
enum HlStatus hl_sampler_dim(const struct HlSampler *sampler, size_t *out);

/**
 * Draw the next element into row-major buffers of length n²; `out_im` may be
 * NULL for SO groups.
 */
enum HlStatus hl_sampler_next(struct HlSampler *sampler, double *out_re, double *out_im);

/**
 * Release a sampler.
 */
void hl_sampler_free(struct HlSampler *sampler);

/**
 * Solve the character table of the group described by `text`, which holds
 * either a multiplication table (first line = order, then rows of 0-based
 * indices) or permutation generators in cycle notation, one per line.
 */
enum HlStatus hl_chartable_parse(const char *text, struct HlCharTable **out);

/**
 * Build the table from a row-major h×h multiplication table of 0-based
 * element indices; element 0 must be the identity.
 */
enum HlStatus hl_chartable_from_mult_table(const uint32_t *mult,
                                           size_t h,
                                           struct HlCharTable **out);

/**
 * Group order h.
 */
enum HlStatus hl_chartable_order(const struct HlCharTable *t, size_t *out);

/**
 * Number of conjugacy classes (= number of irreducibles).
 */
enum HlStatus hl_chartable_class_count(const struct HlCharTable *t, size_t *out);

/**
 * Size of conjugacy class `alpha`.
 */
enum HlStatus hl_chartable_class_size(const struct HlCharTable *t, size_t alpha, size_t *out);

/**
 * Degree of the `kappa`-th irreducible.
 */
enum HlStatus hl_chartable_degree(const struct HlCharTable *t, size_t kappa, uint64_t *out);

/**
 * Character value χ^(κ) on class α, embedded into the complex numbers.
 */
enum HlStatus hl_chartable_entry(const struct HlCharTable *t,
                                 size_t kappa,
                                 size_t alpha,
                                 double *out_re,
                                 double *out_im);

/**
 * Release a character table.
 */
void hl_chartable_free(struct HlCharTable *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HAARLAB_H */
