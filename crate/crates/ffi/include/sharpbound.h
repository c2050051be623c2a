#ifndef SHARPBOUND_H
#define SHARPBOUND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes.
typedef enum SbStatus {
  SB_STATUS_OK = 0,
  SB_STATUS_NULL_POINTER = 1,
  SB_STATUS_INVALID_ARGUMENT = 2,
  SB_STATUS_OUTSIDE_DOMAIN = 3,
  SB_STATUS_GEOMETRY = 4,
  SB_STATUS_CONVEXITY = 5,
  SB_STATUS_UNSUPPORTED = 6,
  SB_STATUS_CONVERGENCE = 7,
  SB_STATUS_DEGENERATE = 8,
  SB_STATUS_NODE_MISMATCH = 9,
  SB_STATUS_IO = 10,
  SB_STATUS_BUFFER_TOO_SMALL = 11,
  SB_STATUS_PANIC = 12,
} SbStatus;

// Convex domain handle.
typedef struct SbDomain SbDomain;

// Discrete solution handle.
typedef struct SbSolution SbSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Length in bytes of the last error message on this thread, without the terminator.
size_t sb_last_error_length(void);

// Copy the last error message, NUL-terminated and truncated to `cap` bytes. Returns the
// number of bytes written, excluding the terminator.
//
// # Safety
// `buf` must point to `cap` writable bytes (or be null when `cap` is 0).
size_t sb_last_error_message(char *buf, size_t cap);

// Library version, static NUL-terminated string.
const char *sb_version(void);

// Lobachevsky function.
double sb_lobachevsky(double theta);

// Lozenge surface tension and gradient at `(x, y)` in the open triangle.
//
// # Safety
// `value` and `gradient` (two doubles) must be valid for writes.
enum SbStatus sb_surface_tension_t(double x, double y, double *value, double *gradient);

// Parse a domain from its JSON description.
//
// # Safety
// `json` must be a NUL-terminated string and `out` valid for writes.
enum SbStatus sb_domain_from_json(const char *json, struct SbDomain **out);

// Convex polygon from `count` vertices stored as `x0, y0, x1, y1, ...`.
//
// # Safety
// `xy` must hold `2 * count` doubles and `out` be valid for writes.
enum SbStatus sb_domain_polygon(const double *xy, size_t count, struct SbDomain **out);

// Axis-aligned box `[lo, hi]` in `dim` dimensions.
//
// # Safety
// `lo` and `hi` must hold `dim` doubles and `out` be valid for writes.
enum SbStatus sb_domain_box(const double *lo, const double *hi, size_t dim, struct SbDomain **out);

// Dimension of a domain, 0 for a null handle.
//
// # Safety
// `d` must be null or a live domain handle.
size_t sb_domain_dim(const struct SbDomain *d);

// Distance from `x` to the boundary.
//
// # Safety
// `x` must hold `dim` doubles and `out` be valid for writes.
enum SbStatus sb_domain_distance(const struct SbDomain *d,
                                 const double *x,
                                 size_t dim,
                                 double *out);

// # Safety
// `d` must be null or a handle from this library not freed before.
void sb_domain_free(struct SbDomain *d);

// Solve `det D²u = rhs` with zero boundary data. `rhs` uses the CLI syntax (`const:1`,
// `upow:-1`, ...), `backend` is `geo` or `fd`.
//
// # Safety
// Strings must be NUL-terminated, `domain` live, `out` valid for writes.
enum SbStatus sb_solve(const struct SbDomain *domain,
                       const char *rhs,
                       const char *backend,
                       double h,
                       struct SbSolution **out);

// Load a solution CSV.
//
// # Safety
// `path` must be NUL-terminated and `out` valid for writes.
enum SbStatus sb_solution_load(const char *path, struct SbSolution **out);

// Write a solution CSV.
//
// # Safety
// `s` must be live and `path` NUL-terminated.
enum SbStatus sb_solution_save(const struct SbSolution *s, const char *path);

// Number of nodes, 0 for a null handle.
//
// # Safety
// `s` must be null or live.
size_t sb_solution_len(const struct SbSolution *s);

// Spatial dimension, 0 for a null handle.
//
// # Safety
// `s` must be null or live.
size_t sb_solution_dim(const struct SbSolution *s);

// Copy node `i`: `coords` receives `cap` ≥ dim doubles, `value` and `mass` one each.
//
// # Safety
// Pointers must be valid for the stated writes.
enum SbStatus sb_solution_node(const struct SbSolution *s,
                               size_t i,
                               double *coords,
                               size_t cap,
                               double *value,
                               double *mass);

// Interpolated value at `x`.
//
// # Safety
// `x` must hold `dim` doubles and `out` be valid for writes.
enum SbStatus sb_solution_interpolate(const struct SbSolution *s,
                                      const double *x,
                                      size_t dim,
                                      double *out);

// Check `u1 ≥ u2` for solutions on the same nodes with `u1 ≥ u2` on the boundary and
// `mass(u1) ≤ mass(u2)`. `max_violation` gets the largest `u2 − u1`; `pass` is 1 when it is
// within the comparison tolerance.
//
// # Safety
// Handles must be live and outputs valid for writes.
enum SbStatus sb_comparison_check(const struct SbSolution *u1,
                                  const struct SbSolution *u2,
                                  double *max_violation,
                                  int32_t *pass);

// # Safety
// `s` must be null or a handle from this library not freed before.
void sb_solution_free(struct SbSolution *s);

// Fit `count` samples `(d[j], v[j])` with model `power`, `loglip` or `gradlog`. `rate` gets
// the exponent or log slope, `r2` the coefficient of determination.
//
// # Safety
// `d` and `v` must hold `count` doubles; `model` NUL-terminated; outputs valid for writes.
enum SbStatus sb_fit_exponent(const double *d,
                              const double *v,
                              size_t count,
                              const char *model,
                              double *rate,
                              double *r2);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHARPBOUND_H */
