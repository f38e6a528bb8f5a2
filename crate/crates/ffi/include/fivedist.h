#ifndef FIVEDIST_H
#define FIVEDIST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Pattern bits reported by [`fd_classify`]; bit `k` stands for pattern `k + 1`.
 */
#define FD_PATTERN_COUNT 8

typedef enum FdStatus {
  FD_STATUS_OK = 0,
  FD_STATUS_NULL_POINTER = 1,
  FD_STATUS_INVALID_ARGUMENT = 2,
  FD_STATUS_OUT_OF_GRID = 3,
  FD_STATUS_DUPLICATE_POINT = 4,
  FD_STATUS_RETRIES_EXHAUSTED = 5,
  FD_STATUS_BEYOND_EXHAUSTIVE_BOUND = 6,
  FD_STATUS_FORMAT = 7,
  FD_STATUS_IO = 8,
  FD_STATUS_PANIC = 9,
} FdStatus;

/**
 * Opaque handle to a point set on the `n × n` grid, kept sorted.
 */
typedef struct FdPointSet FdPointSet;

/**
 * Outcome of [`fd_construct`].
 */
typedef struct FdConstructSummary {
  uint32_t p;
  /**
   * Parabola coefficients `a, b, c, d, e`.
   */
  uint32_t coefficients[5];
  uint64_t initial_size;
  uint64_t refined_size;
  uint64_t final_size;
  uint32_t attempts_used;
} FdConstructSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fd_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * always NUL-terminated when `len > 0`). Returns the full message length in
 * bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t fd_last_error_message(char *buf, size_t len);

/**
 * Creates an empty set on the `n × n` grid.
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle owned by
 * the caller.
 */
enum FdStatus fd_point_set_new(uint32_t n, struct FdPointSet **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `set` must be null or a handle from this library not yet freed.
 */
void fd_point_set_free(struct FdPointSet *set);

/**
 * Inserts `(x, y)`; rejects points outside the grid and duplicates.
 *
 * # Safety
 * `set` must be a live handle.
 */
enum FdStatus fd_point_set_push(struct FdPointSet *set, int64_t x, int64_t y);

/**
 * Number of points in the set; 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t fd_point_set_len(const struct FdPointSet *set);

/**
 * Grid side of the set; 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
uint32_t fd_point_set_grid(const struct FdPointSet *set);

/**
 * The `index`-th point in sorted order.
 *
 * # Safety
 * `set` must be a live handle; `x` and `y` must be valid pointers.
 */
enum FdStatus fd_point_set_get(const struct FdPointSet *set, size_t index, int64_t *x, int64_t *y);

/**
 * Reads a JSON points file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FdStatus fd_point_set_read(const char *path, struct FdPointSet **out);

/**
 * Writes the set as a JSON points file, atomically.
 *
 * # Safety
 * `set` must be a live handle and `path` a NUL-terminated string.
 */
enum FdStatus fd_point_set_write(const struct FdPointSet *set, const char *path);

/**
 * Smallest prime strictly between `lo` and `hi`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum FdStatus fd_prime_in_range(uint64_t lo, uint64_t hi, uint64_t *out);

/**
 * Distinct nonzero squared distances in the `n × n` grid.
 */
uint64_t fd_grid_distinct_distances(uint32_t n);

/**
 * Pattern bitmask of the quadruple `(xs[i], ys[i])`; zero when the four
 * points span at least five distinct distances.
 *
 * # Safety
 * `xs` and `ys` must point to four readable values each; `mask` must be valid.
 */
enum FdStatus fd_classify(const int32_t *xs, const int32_t *ys, uint32_t *mask);

/**
 * Number of forbidden quadruples in the set.
 *
 * # Safety
 * `set` must be a live handle and `out` a valid pointer.
 */
enum FdStatus fd_count_forbidden(const struct FdPointSet *set, uint64_t *out);

/**
 * Exact number of nondegenerate parabolas mod `p` through four points.
 *
 * # Safety
 * `xs` and `ys` must point to four readable values each; `out` must be valid.
 */
enum FdStatus fd_count_solution_quintuples(uint32_t p,
                                           const int64_t *xs,
                                           const int64_t *ys,
                                           uint64_t *out);

/**
 * Runs the construction with default settings for grid size `n` and `seed`.
 * `out_set` may be null when only the summary is wanted.
 *
 * # Safety
 * `summary` must be valid; `out_set` must be null or valid.
 */
enum FdStatus fd_construct(uint32_t n,
                           uint64_t seed,
                           struct FdConstructSummary *summary,
                           struct FdPointSet **out_set);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIVEDIST_H */
