#ifndef SRISUM_H
#define SRISUM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrisumBudgetKind {
  SRISUM_BUDGET_KIND_SENTENCES = 0,
  SRISUM_BUDGET_KIND_WORDS = 1,
} SrisumBudgetKind;

typedef enum SrisumMethod {
  SRISUM_METHOD_INDIVIDUAL_GREEDY = 0,
  SRISUM_METHOD_HOLISTIC_GREEDY = 1,
  SRISUM_METHOD_BEAM = 2,
  SRISUM_METHOD_EXHAUSTIVE = 3,
  SRISUM_METHOD_ORACLE = 4,
} SrisumMethod;

typedef enum SrisumStatus {
  SRISUM_STATUS_OK = 0,
  SRISUM_STATUS_NULL_POINTER = 1,
  SRISUM_STATUS_INVALID_UTF8 = 2,
  SRISUM_STATUS_PARSE_ERROR = 3,
  SRISUM_STATUS_INPUT_ERROR = 4,
  SRISUM_STATUS_CONFIG_ERROR = 5,
  SRISUM_STATUS_BUFFER_TOO_SMALL = 6,
  SRISUM_STATUS_PANIC = 7,
} SrisumStatus;

typedef enum SrisumVariant {
  SRISUM_VARIANT_R1 = 0,
  SRISUM_VARIANT_R2 = 1,
  SRISUM_VARIANT_RL = 2,
  SRISUM_VARIANT_RLSUM = 3,
  SRISUM_VARIANT_RSU4 = 4,
} SrisumVariant;

/**
 * A loaded document cluster with optional embeddings and importance scores.
 */
typedef struct SrisumCluster SrisumCluster;

/**
 * The result of summarizing one cluster.
 */
typedef struct SrisumSelection SrisumSelection;

typedef struct SrisumParams {
  double alpha;
  double theta;
  double lambda;
  enum SrisumMethod method;
  size_t beam_size;
  size_t prefilter_size;
  enum SrisumBudgetKind budget_kind;
  size_t budget;
  uint64_t safety_cap;
} SrisumParams;

typedef struct SrisumRougeScore {
  double precision;
  double recall;
  double f1;
} SrisumRougeScore;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *srisum_last_error(void);

/**
 * Writes the default parameters to `out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SrisumStatus srisum_params_default(struct SrisumParams *out);

/**
 * Writes the parameters of a named preset (`duc`, `tac`, `multinews`,
 * `wikisum`) to `out`.
 *
 * # Safety
 * `name` must be null or a NUL-terminated string; `out` must be null or
 * valid for writes.
 */
enum SrisumStatus srisum_params_preset(const char *name, struct SrisumParams *out);

/**
 * Parses one cluster object (the JSONL line format) into a new handle.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be null or
 * valid for writes. The handle must be released with [`srisum_cluster_free`].
 */
enum SrisumStatus srisum_cluster_from_json(const char *json, struct SrisumCluster **out);

/**
 * Number of sentences in the cluster; 0 for a null handle.
 *
 * # Safety
 * `cluster` must be null or a live handle.
 */
size_t srisum_cluster_len(const struct SrisumCluster *cluster);

/**
 * Attaches sentence embeddings: `rows * dim` values in row-major order,
 * one row per sentence.
 *
 * # Safety
 * `cluster` must be null or a live handle; `data` must be null or point to
 * `rows * dim` readable doubles.
 */
enum SrisumStatus srisum_cluster_set_embeddings(struct SrisumCluster *cluster,
                                                const double *data,
                                                size_t rows,
                                                size_t dim);

/**
 * Attaches external sentence importance scores, one per sentence. They
 * replace graph centrality when summarizing.
 *
 * # Safety
 * `cluster` must be null or a live handle; `scores` must be null or point
 * to `len` readable doubles.
 */
enum SrisumStatus srisum_cluster_set_importance(struct SrisumCluster *cluster,
                                                const double *scores,
                                                size_t len);

/**
 * Releases a cluster handle. Null is ignored.
 *
 * # Safety
 * `cluster` must be null or a handle not yet freed.
 */
void srisum_cluster_free(struct SrisumCluster *cluster);

/**
 * Summarizes a cluster. `params` may be null for the defaults.
 *
 * # Safety
 * `cluster` must be null or a live handle; `params` must be null or
 * readable; `out` must be null or valid for writes. The selection must be
 * released with [`srisum_selection_free`].
 */
enum SrisumStatus srisum_summarize(const struct SrisumCluster *cluster,
                                   const struct SrisumParams *params,
                                   struct SrisumSelection **out);

/**
 * Number of selected sentences; 0 for a null handle.
 *
 * # Safety
 * `selection` must be null or a live handle.
 */
size_t srisum_selection_len(const struct SrisumSelection *selection);

/**
 * Copies the selected sentence ids, in selection order, into `out`, which
 * holds `capacity` entries.
 *
 * # Safety
 * `selection` must be null or a live handle; `out` must be null or valid
 * for `capacity` writes.
 */
enum SrisumStatus srisum_selection_ids(const struct SrisumSelection *selection,
                                       size_t *out,
                                       size_t capacity);

/**
 * Subset score of the selection; NaN for a null handle.
 *
 * # Safety
 * `selection` must be null or a live handle.
 */
double srisum_selection_score(const struct SrisumSelection *selection);

/**
 * Summary text, owned by the selection; null for a null handle.
 *
 * # Safety
 * `selection` must be null or a live handle. The pointer is valid until
 * the selection is freed.
 */
const char *srisum_selection_text(const struct SrisumSelection *selection);

/**
 * Releases a selection handle. Null is ignored.
 *
 * # Safety
 * `selection` must be null or a handle not yet freed.
 */
void srisum_selection_free(struct SrisumSelection *selection);

/**
 * Scores `candidate` against `n_refs` reference texts. A `word_limit` of 0
 * scores the whole candidate. Multiple references use the best F1.
 *
 * # Safety
 * `candidate` must be a NUL-terminated string; `refs` must point to
 * `n_refs` NUL-terminated strings; `out` must be valid for writes.
 */
enum SrisumStatus srisum_rouge(const char *candidate,
                               const char *const *refs,
                               size_t n_refs,
                               enum SrisumVariant variant,
                               bool stemming,
                               size_t word_limit,
                               struct SrisumRougeScore *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SRISUM_H */
