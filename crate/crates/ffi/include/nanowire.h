#ifndef NANOWIRE_H
#define NANOWIRE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum NwStatus {
  NW_STATUS_OK = 0,
  NW_STATUS_NULL_POINTER = 1,
  NW_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Malformed input file or value.
   */
  NW_STATUS_PARSE_ERROR = 3,
  /**
   * Parameters outside the physical domain.
   */
  NW_STATUS_DOMAIN_ERROR = 4,
  /**
   * The fit failed or is not identifiable.
   */
  NW_STATUS_FIT_ERROR = 5,
  /**
   * Output buffer too small; the required length was written.
   */
  NW_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  NW_STATUS_PANIC = 7,
} NwStatus;

/**
 * Result of a weak-localization fit.
 */
typedef struct NwFit NwFit;

/**
 * Lattice image.
 */
typedef struct NwImage NwImage;

/**
 * Strain map from geometric phase analysis.
 */
typedef struct NwStrainMap NwStrainMap;

/**
 * Magnetoconductance trace.
 */
typedef struct NwTrace NwTrace;

/**
 * Fit configuration. Fill with [`nw_fit_options_default`] and adjust.
 */
typedef struct NwFitOptions {
  /**
   * Include the spin-orbit term.
   */
  bool spin_orbit;
  /**
   * Contact spacing L (m).
   */
  double length;
  /**
   * Channel width W (m): the fixed value, or the initial guess if `fit_width`.
   */
  double width;
  bool fit_width;
  double l_phi_init;
  double l_so_init;
  uint32_t max_iterations;
  /**
   * Only |B| <= this enters the fit; <= 0 uses all points.
   */
  double field_window;
} NwFitOptions;

/**
 * Fitted values and standard errors. Errors of fixed parameters are 0;
 * `l_so` is 0 for the base model.
 */
typedef struct NwFitSummary {
  double l_phi;
  double l_phi_err;
  double l_so;
  double l_so_err;
  double width;
  double width_err;
  double background;
  double background_err;
  /**
   * Residual sum of squares (S²).
   */
  double chi2;
  uintptr_t n_points;
  uintptr_t n_iterations;
  bool converged;
} NwFitSummary;

/**
 * Region in pixel indices, half-open.
 */
typedef struct NwRect {
  uintptr_t row0;
  uintptr_t col0;
  uintptr_t rows;
  uintptr_t cols;
} NwRect;

/**
 * Cross-section energy model, SI units.
 */
typedef struct NwCrossSection {
  double gamma_top;
  double gamma_side;
  double gamma_interface;
  double area;
  double misfit;
  double modulus;
  double relaxation_k;
} NwCrossSection;

typedef struct NwShapeOptimum {
  /**
   * Height over width.
   */
  double aspect_ratio;
  /**
   * Energy per unit length (J/m).
   */
  double energy;
  double width;
  double height;
  /**
   * The minimum lies on the search bracket.
   */
  bool edge_minimum;
} NwShapeOptimum;

typedef struct NwTlmResult {
  /**
   * Per contact, per wire (Ω).
   */
  double contact_resistance;
  /**
   * Per wire (Ω/m).
   */
  double resistance_per_length;
  double r_squared;
  /**
   * Standard errors; false with fewer than three points.
   */
  bool has_errors;
  double contact_resistance_err;
  double resistance_per_length_err;
  bool negative_contact_warning;
} NwTlmResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *nw_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *nw_version(void);

/**
 * Quantum correction ΔG (S) at `field` (T). `l_so <= 0` selects the base
 * form; lengths in metres.
 *
 * # Safety
 * `out` must be NULL or writable.
 */
enum NwStatus nw_wl_delta_g(double field,
                            double l_phi,
                            double l_so,
                            double width,
                            double length,
                            double *out);

/**
 * Copies `n` field (T) and conductance (S) values into a new trace.
 *
 * # Safety
 * `field` and `conductance` must point to `n` readable doubles.
 */
enum NwStatus nw_trace_new(const double *field,
                           const double *conductance,
                           uintptr_t n,
                           uint32_t n_parallel,
                           struct NwTrace **out);

/**
 * Reads a trace CSV file.
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
enum NwStatus nw_trace_read_csv(const char *path, struct NwTrace **out);

/**
 * Synthetic trace on `n` evenly spaced fields over `[b_min, b_max]` with
 * Gaussian noise of `noise_sigma` (S), reproducible for a given `seed`.
 *
 * # Safety
 * `out` must be NULL or writable.
 */
enum NwStatus nw_trace_simulate(double l_phi,
                                double l_so,
                                double width,
                                double length,
                                double background,
                                double b_min,
                                double b_max,
                                uintptr_t n,
                                double noise_sigma,
                                uint64_t seed,
                                struct NwTrace **out);

/**
 * Number of points, or 0 for NULL.
 *
 * # Safety
 * `trace` must be NULL or a live handle.
 */
uintptr_t nw_trace_len(const struct NwTrace *trace);

/**
 * # Safety
 * `trace` must be NULL or a handle not yet freed.
 */
void nw_trace_free(struct NwTrace *trace);

/**
 * Default options: base model, L = 1.25 µm, W fixed at 20 nm.
 *
 * # Safety
 * `out` must be NULL or writable.
 */
enum NwStatus nw_fit_options_default(struct NwFitOptions *out);

/**
 * Fits the trace; the result handle must be released with [`nw_fit_free`].
 *
 * # Safety
 * `trace` must be a live handle, `options` readable, `out` writable.
 */
enum NwStatus nw_fit_wl(const struct NwTrace *trace,
                        const struct NwFitOptions *options,
                        struct NwFit **out);

/**
 * # Safety
 * `fit` must be a live handle and `out` writable.
 */
enum NwStatus nw_fit_summary(const struct NwFit *fit, struct NwFitSummary *out);

/**
 * Fitted per-wire conductance (S) at `field`.
 *
 * # Safety
 * `fit` must be a live handle and `out` writable.
 */
enum NwStatus nw_fit_predict(const struct NwFit *fit, double field, double *out);

/**
 * # Safety
 * `fit` must be NULL or a handle not yet freed.
 */
void nw_fit_free(struct NwFit *fit);

/**
 * Profile-likelihood lower bound on l_so at `confidence`. `noise_sigma > 0`
 * fixes the per-wire noise level, otherwise it is estimated from residuals.
 * `*bounded` is false when no tested l_so was rejected; `*bound` is then 0.
 *
 * # Safety
 * `trace` must be a live handle, `options` readable, outputs writable.
 */
enum NwStatus nw_lso_lower_bound(const struct NwTrace *trace,
                                 const struct NwFitOptions *options,
                                 double confidence,
                                 double noise_sigma,
                                 double *bound,
                                 bool *bounded);

/**
 * Copies a row-major `rows x cols` image.
 *
 * # Safety
 * `values` must point to `rows * cols` readable doubles.
 */
enum NwStatus nw_image_new(const double *values,
                           uintptr_t rows,
                           uintptr_t cols,
                           double pixel_size_nm,
                           struct NwImage **out);

/**
 * Reads a `.gpa1` raster file.
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
enum NwStatus nw_image_read(const char *path, struct NwImage **out);

/**
 * # Safety
 * `image` must be NULL or a handle not yet freed.
 */
void nw_image_free(struct NwImage *image);

/**
 * Strain along `g = (gx, gy)` (nm⁻¹) relative to `reference`.
 * `mask_sigma <= 0` uses the default mask |g|/6.
 *
 * # Safety
 * `image` must be a live handle and `out` writable.
 */
enum NwStatus nw_strain_map(const struct NwImage *image,
                            double gx,
                            double gy,
                            double mask_sigma,
                            struct NwRect reference,
                            struct NwStrainMap **out);

/**
 * Shape and untrusted border width of a strain map.
 *
 * # Safety
 * `map` must be a live handle and the outputs writable.
 */
enum NwStatus nw_strain_map_dims(const struct NwStrainMap *map,
                                 uintptr_t *rows,
                                 uintptr_t *cols,
                                 uintptr_t *border_px);

/**
 * Copies the row-major strain values into `buf`.
 *
 * # Safety
 * `map` must be a live handle and `buf` must hold `len` doubles.
 */
enum NwStatus nw_strain_map_values(const struct NwStrainMap *map, double *buf, uintptr_t len);

/**
 * # Safety
 * `map` must be NULL or a handle not yet freed.
 */
void nw_strain_map_free(struct NwStrainMap *map);

/**
 * Profile from `(row0, col0)` to `(row1, col1)` averaged over `width_px`.
 * Writes up to `capacity` samples of distance (nm) and strain; `*len`
 * receives the sample count, also when the buffers are too small.
 *
 * # Safety
 * `map` must be a live handle; `distance` and `value` must hold
 * `capacity` doubles; `len` writable.
 */
enum NwStatus nw_line_scan(const struct NwStrainMap *map,
                           double row0,
                           double col0,
                           double row1,
                           double col1,
                           uintptr_t width_px,
                           double *distance,
                           double *value,
                           uintptr_t capacity,
                           uintptr_t *len);

/**
 * # Safety
 * `out` must be writable.
 */
enum NwStatus nw_cross_section_default(struct NwCrossSection *out);

/**
 * Minimum-energy aspect ratio within `[r_lo, r_hi]`.
 *
 * # Safety
 * `model` must be readable and `out` writable.
 */
enum NwStatus nw_minimize_aspect_ratio(const struct NwCrossSection *model,
                                       double r_lo,
                                       double r_hi,
                                       struct NwShapeOptimum *out);

/**
 * Angle (degrees) between the normals of two Miller planes.
 *
 * # Safety
 * `a` and `b` must point to 3 ints; `out` writable.
 */
enum NwStatus nw_facet_dihedral(const int32_t *a, const int32_t *b, double *out);

/**
 * Transfer-length fit of `n` measured resistances (Ω) at channel lengths
 * (m) through `n_parallel` wires.
 *
 * # Safety
 * `lengths` and `resistances` must hold `n` doubles; `out` writable.
 */
enum NwStatus nw_tlm_fit(const double *lengths,
                         const double *resistances,
                         uintptr_t n,
                         uint32_t n_parallel,
                         struct NwTlmResult *out);

/**
 * `control / sample`; `*attributed` is set when the ratio reaches `threshold`.
 *
 * # Safety
 * `ratio` and `attributed` must be writable.
 */
enum NwStatus nw_control_ratio(double sample,
                               double control,
                               double threshold,
                               double *ratio,
                               bool *attributed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NANOWIRE_H */
