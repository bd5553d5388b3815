/* latcart — latent-space geometry measures and density-equalizing
 * transforms behind a plain C interface.
 *
 * Conventions:
 *   - every fallible call returns lc_status; on failure the thread-local
 *     message from lc_last_error() describes the problem
 *   - objects are opaque handles created by lc_*_create/load/solve calls
 *     and released with the matching lc_*_free
 *   - points are (z1, z2) pairs; arrays of points are flat [x0,y0,x1,y1,...]
 *   - fields are row-major with axis 1 outermost, components innermost
 */
#ifndef LATCART_H
#define LATCART_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef LC_API
#if defined(_WIN32)
#define LC_API
#else
#define LC_API __attribute__((visibility("default")))
#endif
#endif

typedef enum lc_status {
    LC_OK = 0,
    LC_ERR_INPUT = 1,  /* bad arguments or violated preconditions */
    LC_ERR_DOMAIN = 2, /* point outside a field or map domain */
    LC_ERR_FORMAT = 3, /* malformed file */
    LC_ERR_SOLVER = 4  /* non-convergence, inverted mesh, degenerate quad */
} lc_status;

typedef struct lc_grid_spec {
    double min1, max1, min2, max2;
    int32_t n1, n2;
} lc_grid_spec;

typedef struct lc_diffusion_params {
    double pad_factor;            /* padded size / max(n1,n2), >= 1.5 */
    double density_floor_rel;     /* density floor as fraction of the mean */
    double convergence_tol;       /* stopping rule threshold, cell widths */
    double max_time_factor;       /* horizon: exp(-lambda_min t) = 10^-x */
    double rk_safety;             /* step controller safety factor */
    double max_step_displacement; /* per-step displacement cap, cell widths */
    double step_error_tol;        /* per-step embedded error cap, cell widths */
} lc_diffusion_params;

typedef struct lc_solve_diagnostics {
    int32_t padded_size;
    int32_t steps_accepted;
    int32_t steps_rejected;
    double final_time;
    double horizon_time;
    double final_step_increment_cells;
    double max_displacement_cells;
} lc_solve_diagnostics;

typedef struct lc_eval_report {
    double entropy_before, entropy_after; /* nats */
    int32_t has_f1;                       /* 1 when embeddings carry labels */
    double f1_before, f1_after;
    double density_cv_before, density_cv_after;
    double area_ratio;
} lc_eval_report;

typedef struct lc_embeddings lc_embeddings;
typedef struct lc_meaning_field lc_meaning_field;
typedef struct lc_measure_field lc_measure_field;
typedef struct lc_transform_field lc_transform_field;

/* ---- diagnostics and process-wide knobs ---- */

LC_API const char* lc_last_error(void);
LC_API void lc_set_max_threads(int32_t n); /* 0 = hardware concurrency */
LC_API void lc_string_free(char* s);
LC_API const char* lc_version(void);

/* ---- embeddings ---- */

LC_API lc_status lc_embeddings_create(const double* xy, const char* const* labels_or_null,
                                      int64_t n, lc_embeddings** out);
LC_API void lc_embeddings_free(lc_embeddings* e);
LC_API int64_t lc_embeddings_count(const lc_embeddings* e);
LC_API const double* lc_embeddings_xy(const lc_embeddings* e);
LC_API int32_t lc_embeddings_labeled(const lc_embeddings* e);
LC_API const char* lc_embeddings_label(const lc_embeddings* e, int64_t i);
LC_API lc_status lc_embeddings_save(const char* path, const lc_embeddings* e);
LC_API lc_status lc_embeddings_load(const char* path, lc_embeddings** out);

/* ---- grid ---- */

LC_API lc_status lc_build_grid(const lc_embeddings* e, int32_t n1, int32_t n2,
                               double pad_fraction, lc_grid_spec* out);
LC_API lc_status lc_cell_center(const lc_grid_spec* spec, int32_t i, int32_t j, double out[2]);

/* ---- meaning fields ---- */

LC_API lc_status lc_meaning_create(const lc_grid_spec* spec, int32_t dh, int32_t distribution,
                                   const double* values, lc_meaning_field** out);
LC_API void lc_meaning_free(lc_meaning_field* f);
LC_API lc_status lc_meaning_info(const lc_meaning_field* f, lc_grid_spec* spec_or_null,
                                 int32_t* dh_or_null, int32_t* distribution_or_null);
LC_API const double* lc_meaning_values(const lc_meaning_field* f);
LC_API lc_status lc_meaning_sample(const lc_meaning_field* f, const double z[2], double* out);
LC_API lc_status lc_meaning_save(const char* path, const lc_meaning_field* f);
LC_API lc_status lc_meaning_load(const char* path, lc_meaning_field** out);

/* ---- measure fields ---- */

LC_API lc_status lc_measure_create(const lc_grid_spec* spec, const double* values,
                                   lc_measure_field** out);
LC_API void lc_measure_free(lc_measure_field* f);
LC_API lc_status lc_measure_info(const lc_measure_field* f, lc_grid_spec* spec);
LC_API const double* lc_measure_values(const lc_measure_field* f);
LC_API lc_status lc_measure_sample(const lc_measure_field* f, const double z[2], double* out);
LC_API lc_status lc_measure_save(const char* path, const lc_measure_field* f);
LC_API lc_status lc_measure_load(const char* path, lc_measure_field** out);

/* 0 = meaning, 1 = measure, 2 = transform */
LC_API lc_status lc_probe_field(const char* path, int32_t* kind);

/* ---- measures ---- */

LC_API lc_status lc_riemannian_measure(const lc_meaning_field* H, lc_measure_field** out);
/* kind: "jsd" | "euclidean" | "cosine" */
LC_API lc_status lc_heuristic_measure(const lc_meaning_field* H, const char* kind,
                                      lc_measure_field** out);
LC_API lc_status lc_classifier_measure(const lc_meaning_field* P, lc_measure_field** out);
LC_API lc_status lc_jsd_distance(const double* p, const double* q, int32_t d, double* out);
LC_API lc_status lc_gaussian_blur(const lc_measure_field* m, double sigma_cells,
                                  lc_measure_field** out);
LC_API lc_status lc_relax_to_mean(const lc_measure_field* m, const lc_embeddings* e,
                                  double sigma_relax, lc_measure_field** out);

/* ---- density-equalizing transform ---- */

LC_API void lc_diffusion_params_default(lc_diffusion_params* out);
LC_API lc_status lc_solve_transform(const lc_measure_field* m,
                                    const lc_diffusion_params* params_or_null,
                                    lc_transform_field** out);
LC_API void lc_transform_free(lc_transform_field* t);
LC_API lc_status lc_transform_info(const lc_transform_field* t, lc_grid_spec* spec_or_null,
                                   lc_solve_diagnostics* diag_or_null);
LC_API const double* lc_transform_positions(const lc_transform_field* t);
LC_API lc_status lc_identity_transform(const lc_grid_spec* spec, lc_transform_field** out);
LC_API lc_status lc_transform_save(const char* path, const lc_transform_field* t);
LC_API lc_status lc_transform_load(const char* path, lc_transform_field** out);
LC_API lc_status lc_forward_map(const lc_transform_field* t, const double* pts, int64_t n,
                                double* out);
LC_API lc_status lc_inverse_map(const lc_transform_field* t, const double* pts, int64_t n,
                                double* out);
LC_API lc_status lc_cell_density_after(const lc_measure_field* m, const lc_transform_field* t,
                                       lc_measure_field** out);
LC_API lc_status lc_transform_stats(const lc_measure_field* m, const lc_transform_field* t,
                                    double* cv_before, double* cv_after, double* area_ratio);

/* ---- geometry ---- */

/* z_out/zt_out hold n_points points each; cum_out n_points lengths. */
LC_API lc_status lc_pseudo_geodesic(const lc_transform_field* t, const double a[2],
                                    const double b[2], int32_t n_points, double* z_out,
                                    double* zt_out_or_null, double* cum_out_or_null,
                                    double* length_out_or_null);
LC_API lc_status lc_transformed_path_length(const lc_transform_field* t, const double* pts,
                                            int64_t n, double* out);
LC_API lc_status lc_distance_field(const lc_transform_field* t, const double z0[2],
                                   lc_measure_field** out);
LC_API lc_status lc_transform_embeddings(const lc_transform_field* t, const lc_embeddings* e,
                                         int32_t inverse, lc_embeddings** out);

/* ---- evaluation ---- */

LC_API lc_status lc_histogram_entropy(const lc_embeddings* e, int32_t bins_per_axis, double* out);
/* k = 0 picks the number of distinct labels. assignments (optional) gets one
 * cluster index per point. */
LC_API lc_status lc_kmeans_f1(const lc_embeddings* e, int32_t k, uint64_t seed, int32_t restarts,
                              double* f1_out, int32_t* assignments_or_null);
LC_API lc_status lc_fit_classifier_field(const lc_embeddings* e, const lc_grid_spec* spec,
                                         double l2_penalty, int32_t max_iters,
                                         lc_meaning_field** out, int32_t* converged_or_null);
LC_API lc_status lc_equalization_report(const lc_measure_field* m, const lc_transform_field* t,
                                        const lc_embeddings* before, const lc_embeddings* after,
                                        int32_t bins, uint64_t seed, int32_t restarts,
                                        lc_eval_report* out);

/* ---- rendering ---- */

/* Produces an SVG 1.1 document (free with lc_string_free). Layers render in
 * the order heatmap, contours, paths, scatter, each only when its data is
 * present. contrast: "linear" | "sqrt"; colormap: "red" | "black" | "blue". */
LC_API lc_status lc_render_svg(const lc_measure_field* measure_or_null,
                               const lc_embeddings* embeddings_or_null,
                               const double* const* paths_or_null,
                               const int64_t* path_lens_or_null, int32_t n_paths,
                               const lc_measure_field* dist_or_null, int32_t width, int32_t height,
                               const char* contrast, const char* colormap,
                               const double* contour_levels, int32_t n_levels, char** svg_out);

/* ---- fixtures ---- */

/* name: "identity" | "affine" | "parabola" | "sine" */
LC_API lc_status lc_fixture_analytic_meaning(const char* name, const lc_grid_spec* spec,
                                             lc_meaning_field** out);
LC_API lc_status lc_fixture_distorted_mixture(int32_t n_per_class, int32_t classes, double squash,
                                              uint64_t seed, lc_embeddings** emb_out,
                                              lc_measure_field** measure_out);
LC_API lc_status lc_fixture_bump_density(const lc_grid_spec* spec, const double* centers,
                                         const double* sigmas, const double* amplitudes,
                                         int32_t k, lc_measure_field** out);

#ifdef __cplusplus
}
#endif

#endif /* LATCART_H */
