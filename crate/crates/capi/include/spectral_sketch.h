/* C ABI for the spectral-sketch library. */

#ifndef SPECTRAL_SKETCH_H
#define SPECTRAL_SKETCH_H

#pragma once

/* Generated by cbindgen from spectral-sketch-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes mirrored in the C header.
 */
typedef enum SsStatus {
  SS_STATUS_OK = 0,
  SS_STATUS_NULL_POINTER = 1,
  SS_STATUS_INVALID_ARGUMENT = 2,
  SS_STATUS_DIMENSION_MISMATCH = 3,
  SS_STATUS_NON_FINITE = 4,
  SS_STATUS_EMPTY_RANGE = 5,
  SS_STATUS_PARSE_ERROR = 6,
  SS_STATUS_IO_ERROR = 7,
  SS_STATUS_PANIC = 8,
} SsStatus;

/*
 Opaque graph handle.
 */
typedef struct SsGraph SsGraph;

/*
 Opaque symmetric operator handle.
 */
typedef struct SsOperator SsOperator;

/*
 Opaque solver result handle.
 */
typedef struct SsResult SsResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Last error message for this thread, or NULL when no error is recorded.
 The pointer stays valid until the next failing call on the same thread.
 */
const char *ss_last_error(void);

/*
 Dense symmetric operator from row-major entries (length n*n).

 # Safety
 `entries` must point to `n * n` readable doubles and `out` must be a valid
 destination pointer.
 */
enum SsStatus ss_operator_dense(size_t n, const double *entries, struct SsOperator **out);

/*
 Synthetic-spectrum operator in the canonical basis (`kind`: 1-4 for the
 benchmark profiles, 0 for the flat worst case with the given d and q).
 Returns the exact top eigenvalue through `out_lambda1`.

 # Safety
 `out` and `out_lambda1` must be valid destination pointers.
 */
enum SsStatus ss_operator_synthetic(uint32_t kind,
                                    size_t n,
                                    size_t i0,
                                    size_t d,
                                    uint32_t q,
                                    struct SsOperator **out,
                                    double *out_lambda1);

/*
 # Safety
 `op` must be a handle returned by this library, not yet freed.
 */
void ss_operator_free(struct SsOperator *op);

/*
 # Safety
 `op` must be a live operator handle.
 */
size_t ss_operator_dim(const struct SsOperator *op);

/*
 Load an edge list (`u v [w]`, '#'/'%' comments, `.gz` transparent).

 # Safety
 `path` must be a NUL-terminated string and `out` a valid destination.
 */
enum SsStatus ss_graph_load(const char *path, bool signed_weights, struct SsGraph **out);

/*
 # Safety
 `g` must be a live graph handle.
 */
void ss_graph_free(struct SsGraph *g);

/*
 # Safety
 `g` must be a live graph handle; `out` a valid destination.
 */
enum SsStatus ss_graph_adjacency(const struct SsGraph *g, struct SsOperator **out);

/*
 # Safety
 `g` must be a live graph handle; `out` a valid destination.
 */
enum SsStatus ss_graph_modularity(const struct SsGraph *g, struct SsOperator **out);

/*
 Gaussian-sketch solver run.

 # Safety
 `op` must be a live operator handle; `out` a valid destination.
 */
enum SsStatus ss_rsvd(const struct SsOperator *op,
                      uint32_t q,
                      size_t d,
                      uint64_t seed,
                      struct SsResult **out);

/*
 Half-Gaussian half-Bernoulli solver run.

 # Safety
 `op` must be a live operator handle; `out` a valid destination.
 */
enum SsStatus ss_randsum(const struct SsOperator *op,
                         uint32_t q,
                         size_t d,
                         double p,
                         uint64_t seed,
                         struct SsResult **out);

/*
 # Safety
 `r` must be a live result handle.
 */
void ss_result_free(struct SsResult *r);

/*
 # Safety
 `r` must be a live result handle.
 */
double ss_result_rayleigh(const struct SsResult *r);

/*
 # Safety
 `r` must be a live result handle.
 */
uint32_t ss_result_passes(const struct SsResult *r);

/*
 # Safety
 `r` must be a live result handle.
 */
size_t ss_result_rank(const struct SsResult *r);

/*
 Copy the unit eigenvector estimate into `buffer` (capacity `len >= n`);
 returns the vector length, or 0 on a short buffer.

 # Safety
 `r` must be a live result handle and `buffer` writable for `len` doubles.
 */
size_t ss_result_vector(const struct SsResult *r, double *buffer, size_t len);

/*
 Signed tail-mass ratio of an explicit spectrum (descending not required;
 values are ordered internally).

 # Safety
 `values` must point to `len` readable doubles; `out` must be valid.
 */
enum SsStatus ss_kappa(const double *values, size_t len, uint32_t q, double *out);

/*
 Lanczos baseline for the algebraically largest eigenvalue.

 # Safety
 `op` must be a live operator handle; out pointers must be valid.
 */
enum SsStatus ss_lanczos_top(const struct SsOperator *op,
                             size_t max_iter,
                             double tol,
                             uint64_t seed,
                             double *out_lambda1,
                             bool *out_converged);

/*
 Best-of-k conflicting-group detection on a signed graph; fills the
 assignment buffer with {-1, 0, +1} and returns the polarity score.

 # Safety
 `g` must be a live graph handle and `assignment` writable for `len` bytes;
 `out_score` must be valid.
 */
enum SsStatus ss_conflicting_groups(const struct SsGraph *g,
                                    uint32_t q,
                                    size_t d,
                                    double p,
                                    uint64_t seed,
                                    size_t rounding_trials,
                                    bool use_randsum,
                                    int8_t *assignment,
                                    size_t len,
                                    double *out_score);

/*
 Two-way community detection on an unsigned graph; fills the +-1 assignment
 buffer and returns the modularity score.

 # Safety
 Same contract as [`ss_conflicting_groups`].
 */
enum SsStatus ss_communities(const struct SsGraph *g,
                             uint32_t q,
                             size_t d,
                             double p,
                             uint64_t seed,
                             bool use_randsum,
                             int8_t *assignment,
                             size_t len,
                             double *out_score);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAL_SKETCH_H */
