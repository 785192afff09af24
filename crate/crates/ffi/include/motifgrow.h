#ifndef MOTIFGROW_H
#define MOTIFGROW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  MG_STATUS_OK = 0,
  MG_STATUS_NULL_POINTER = 1,
  MG_STATUS_INVALID_UTF8 = 2,
  MG_STATUS_CONFIG_ERROR = 3,
  MG_STATUS_GROWTH_ERROR = 4,
  MG_STATUS_OUT_OF_RANGE = 5,
  MG_STATUS_IO_ERROR = 6,
  MG_STATUS_OVERFLOW = 7,
  MG_STATUS_PANIC = 8,
} MgStatus;

/**
 * Resolved growth configuration.
 */
typedef struct MgConfig MgConfig;

/**
 * A generated model together with its per-step trace.
 */
typedef struct MgModel MgModel;

/**
 * Closed-form counts. `n_e` is real-valued for randomized predictions.
 */
typedef struct {
  uint64_t n_v;
  double n_e;
  uint64_t n_be;
} MgCounts;

/**
 * One trace row; step 0 holds the initial counts.
 */
typedef struct {
  uint32_t step;
  uint64_t n_v;
  uint64_t n_e;
  uint64_t n_be;
  uint64_t removed;
  uint64_t added;
  uint64_t x_size;
  uint64_t y_size;
} MgTraceRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mg_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *mg_version(void);

/**
 * Parses and validates a TOML configuration document.
 *
 * # Safety
 * `toml` must be a valid nul-terminated string and `out` a valid pointer.
 */
MgStatus mg_config_from_toml(const char *toml, MgConfig **out);

/**
 * # Safety
 * `config` must be null or a handle from [`mg_config_from_toml`] not yet freed.
 */
void mg_config_free(MgConfig *config);

/**
 * # Safety
 * `config` must be a live handle.
 */
MgStatus mg_config_set_steps(MgConfig *config, uint32_t steps);

/**
 * # Safety
 * `config` must be a live handle.
 */
MgStatus mg_config_set_rng_seed(MgConfig *config, uint64_t rng_seed);

/**
 * # Safety
 * `config` must be a live handle.
 */
uint32_t mg_config_steps(const MgConfig *config);

/**
 * Closed-form counts at the configuration's final step. Randomized
 * configurations yield the expected edge count.
 *
 * # Safety
 * `config` must be a live handle and `out` a valid pointer.
 */
MgStatus mg_config_predict_counts(const MgConfig *config, MgCounts *out);

/**
 * Deterministic closed-form counts for explicit structure parameters.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
MgStatus mg_predict_counts(uint64_t n_v0,
                           uint64_t n_e0,
                           uint64_t m_v,
                           uint64_t m_e,
                           uint64_t r,
                           uint32_t t,
                           MgCounts *out);

/**
 * Runs the configured growth.
 *
 * # Safety
 * `config` must be a live handle and `out` a valid pointer.
 */
MgStatus mg_model_grow(const MgConfig *config, MgModel **out);

/**
 * # Safety
 * `model` must be null or a handle from [`mg_model_grow`] not yet freed.
 */
void mg_model_free(MgModel *model);

/**
 * # Safety
 * `model` must be null or a live handle. Returns 0 for null.
 */
uint64_t mg_model_vertex_count(const MgModel *model);

/**
 * # Safety
 * `model` must be null or a live handle. Returns 0 for null.
 */
uint64_t mg_model_edge_count(const MgModel *model);

/**
 * # Safety
 * `model` must be null or a live handle. Returns 0 for null.
 */
uint64_t mg_model_bound_count(const MgModel *model);

/**
 * # Safety
 * `model` must be null or a live handle. Returns 0 for null.
 */
uint32_t mg_model_step(const MgModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
MgStatus mg_model_degree(const MgModel *model, uint32_t vertex, uint32_t *out);

/**
 * Exact diameter. `*connected` is set to false (and `*out` to 0) for a
 * disconnected model.
 *
 * # Safety
 * `model` must be a live handle; `out` and `connected` valid pointers.
 */
MgStatus mg_model_diameter(const MgModel *model, uint32_t *out, bool *connected);

/**
 * Number of trace rows (final step + 1).
 *
 * # Safety
 * `model` must be null or a live handle. Returns 0 for null.
 */
size_t mg_model_trace_len(const MgModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
MgStatus mg_model_trace_row(const MgModel *model, size_t index, MgTraceRow *out);

/**
 * Copies the sorted edge list as `(u, v)` pairs into `buf`, which holds
 * `capacity` pairs (`2 * capacity` integers). `*written` receives the
 * number of pairs copied; `OutOfRange` if `capacity` is too small. Pass a
 * null `buf` to query the required capacity in `*written`.
 *
 * # Safety
 * `model` must be a live handle, `written` a valid pointer, and `buf` null
 * or valid for `2 * capacity` writes.
 */
MgStatus mg_model_copy_edges(const MgModel *model, uint32_t *buf, size_t capacity, size_t *written);

/**
 * Writes the sorted `u v` edge list to `path`.
 *
 * # Safety
 * `model` must be a live handle and `path` a valid nul-terminated string.
 */
MgStatus mg_model_write_edge_list(const MgModel *model, const char *path);

/**
 * Writes the trace as CSV to `path`.
 *
 * # Safety
 * `model` must be a live handle and `path` a valid nul-terminated string.
 */
MgStatus mg_model_write_trace(const MgModel *model, const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOTIFGROW_H */
