#include "latcart/latcart.h"

#include <cstdlib>
#include <cstring>
#include <set>
#include <string>

#include "core/cartogram.hpp"
#include "core/eval.hpp"
#include "core/fixtures.hpp"
#include "core/geometry.hpp"
#include "core/grid.hpp"
#include "core/io.hpp"
#include "core/measures.hpp"
#include "core/render.hpp"
#include "core/threading.hpp"

using namespace latcart;

struct lc_embeddings {
    EmbeddingSet data;
};
struct lc_meaning_field {
    MeaningField data;
};
struct lc_measure_field {
    MeasureField data;
};
struct lc_transform_field {
    TransformField data;
};

namespace {

thread_local std::string t_last_error;

template <typename F>
lc_status guarded(F&& f) {
    try {
        f();
        return LC_OK;
    } catch (const InputError& e) {
        t_last_error = e.what();
        return LC_ERR_INPUT;
    } catch (const DomainError& e) {
        t_last_error = e.what();
        return LC_ERR_DOMAIN;
    } catch (const FormatError& e) {
        t_last_error = e.what();
        return LC_ERR_FORMAT;
    } catch (const SolverError& e) {
        t_last_error = e.what();
        return LC_ERR_SOLVER;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return LC_ERR_INPUT;
    }
}

GridSpec from_c(const lc_grid_spec& s) {
    return make_grid(s.min1, s.max1, s.min2, s.max2, s.n1, s.n2);
}

lc_grid_spec to_c(const GridSpec& s) {
    return lc_grid_spec{s.min1, s.max1, s.min2, s.max2, s.n1, s.n2};
}

void require(bool ok, const char* what) {
    if (!ok) throw InputError(what);
}

} // namespace

extern "C" {

const char* lc_last_error(void) { return t_last_error.c_str(); }

void lc_set_max_threads(int32_t n) { set_max_threads(n); }

void lc_string_free(char* s) { std::free(s); }

const char* lc_version(void) { return "0.1.0"; }

/* ---- embeddings ---- */

lc_status lc_embeddings_create(const double* xy, const char* const* labels, int64_t n,
                               lc_embeddings** out) {
    return guarded([&] {
        require(out && (xy || n == 0) && n >= 0, "bad arguments");
        auto* e = new lc_embeddings;
        e->data.xy.assign(xy, xy + 2 * n);
        if (labels) {
            e->data.labels.reserve(n);
            for (int64_t i = 0; i < n; ++i) e->data.labels.emplace_back(labels[i] ? labels[i] : "");
        }
        try {
            validate_embeddings(e->data);
        } catch (...) {
            delete e;
            throw;
        }
        *out = e;
    });
}

void lc_embeddings_free(lc_embeddings* e) { delete e; }

int64_t lc_embeddings_count(const lc_embeddings* e) { return e ? e->data.size() : 0; }

const double* lc_embeddings_xy(const lc_embeddings* e) { return e ? e->data.xy.data() : nullptr; }

int32_t lc_embeddings_labeled(const lc_embeddings* e) { return e && e->data.labeled() ? 1 : 0; }

const char* lc_embeddings_label(const lc_embeddings* e, int64_t i) {
    if (!e || !e->data.labeled() || i < 0 || i >= e->data.size()) return nullptr;
    return e->data.labels[static_cast<std::size_t>(i)].c_str();
}

lc_status lc_embeddings_save(const char* path, const lc_embeddings* e) {
    return guarded([&] {
        require(path && e, "bad arguments");
        save_embeddings(path, e->data);
    });
}

lc_status lc_embeddings_load(const char* path, lc_embeddings** out) {
    return guarded([&] {
        require(path && out, "bad arguments");
        auto* e = new lc_embeddings;
        try {
            e->data = load_embeddings(path);
        } catch (...) {
            delete e;
            throw;
        }
        *out = e;
    });
}

/* ---- grid ---- */

lc_status lc_build_grid(const lc_embeddings* e, int32_t n1, int32_t n2, double pad_fraction,
                        lc_grid_spec* out) {
    return guarded([&] {
        require(e && out, "bad arguments");
        *out = to_c(build_grid(e->data, n1, n2, pad_fraction));
    });
}

lc_status lc_cell_center(const lc_grid_spec* spec, int32_t i, int32_t j, double out[2]) {
    return guarded([&] {
        require(spec && out, "bad arguments");
        Point p = cell_center(from_c(*spec), i, j);
        out[0] = p[0];
        out[1] = p[1];
    });
}

/* ---- meaning fields ---- */

lc_status lc_meaning_create(const lc_grid_spec* spec, int32_t dh, int32_t distribution,
                            const double* values, lc_meaning_field** out) {
    return guarded([&] {
        require(spec && values && out, "bad arguments");
        auto* f = new lc_meaning_field;
        f->data.spec = from_c(*spec);
        f->data.dh = dh;
        f->data.distribution = distribution != 0;
        f->data.values.assign(values, values + f->data.spec.cells() * std::max(dh, 0));
        try {
            validate_meaning(f->data);
        } catch (...) {
            delete f;
            throw;
        }
        *out = f;
    });
}

void lc_meaning_free(lc_meaning_field* f) { delete f; }

lc_status lc_meaning_info(const lc_meaning_field* f, lc_grid_spec* spec, int32_t* dh,
                          int32_t* distribution) {
    return guarded([&] {
        require(f, "bad arguments");
        if (spec) *spec = to_c(f->data.spec);
        if (dh) *dh = f->data.dh;
        if (distribution) *distribution = f->data.distribution ? 1 : 0;
    });
}

const double* lc_meaning_values(const lc_meaning_field* f) {
    return f ? f->data.values.data() : nullptr;
}

lc_status lc_meaning_sample(const lc_meaning_field* f, const double z[2], double* out) {
    return guarded([&] {
        require(f && z && out, "bad arguments");
        bilinear_sample(f->data.spec, f->data.values.data(), f->data.dh, {z[0], z[1]}, out);
    });
}

lc_status lc_meaning_save(const char* path, const lc_meaning_field* f) {
    return guarded([&] {
        require(path && f, "bad arguments");
        save_field(path, f->data);
    });
}

lc_status lc_meaning_load(const char* path, lc_meaning_field** out) {
    return guarded([&] {
        require(path && out, "bad arguments");
        auto* f = new lc_meaning_field;
        try {
            f->data = load_meaning(path);
        } catch (...) {
            delete f;
            throw;
        }
        *out = f;
    });
}

/* ---- measure fields ---- */

lc_status lc_measure_create(const lc_grid_spec* spec, const double* values,
                            lc_measure_field** out) {
    return guarded([&] {
        require(spec && values && out, "bad arguments");
        auto* f = new lc_measure_field;
        f->data.spec = from_c(*spec);
        f->data.values.assign(values, values + f->data.spec.cells());
        try {
            validate_measure(f->data, false);
        } catch (...) {
            delete f;
            throw;
        }
        *out = f;
    });
}

void lc_measure_free(lc_measure_field* f) { delete f; }

lc_status lc_measure_info(const lc_measure_field* f, lc_grid_spec* spec) {
    return guarded([&] {
        require(f && spec, "bad arguments");
        *spec = to_c(f->data.spec);
    });
}

const double* lc_measure_values(const lc_measure_field* f) {
    return f ? f->data.values.data() : nullptr;
}

lc_status lc_measure_sample(const lc_measure_field* f, const double z[2], double* out) {
    return guarded([&] {
        require(f && z && out, "bad arguments");
        *out = bilinear_sample_scalar(f->data, {z[0], z[1]});
    });
}

lc_status lc_measure_save(const char* path, const lc_measure_field* f) {
    return guarded([&] {
        require(path && f, "bad arguments");
        save_field(path, f->data);
    });
}

lc_status lc_measure_load(const char* path, lc_measure_field** out) {
    return guarded([&] {
        require(path && out, "bad arguments");
        auto* f = new lc_measure_field;
        try {
            f->data = load_measure(path);
        } catch (...) {
            delete f;
            throw;
        }
        *out = f;
    });
}

lc_status lc_probe_field(const char* path, int32_t* kind) {
    return guarded([&] {
        require(path && kind, "bad arguments");
        *kind = static_cast<int32_t>(probe_field(path));
    });
}

/* ---- measures ---- */

lc_status lc_riemannian_measure(const lc_meaning_field* H, lc_measure_field** out) {
    return guarded([&] {
        require(H && out, "bad arguments");
        *out = new lc_measure_field{riemannian_measure(H->data)};
    });
}

lc_status lc_heuristic_measure(const lc_meaning_field* H, const char* kind,
                               lc_measure_field** out) {
    return guarded([&] {
        require(H && kind && out, "bad arguments");
        DissimilarityKind d;
        std::string k = kind;
        if (k == "jsd")
            d = DissimilarityKind::jsd;
        else if (k == "euclidean")
            d = DissimilarityKind::euclidean;
        else if (k == "cosine")
            d = DissimilarityKind::cosine;
        else
            throw InputError("unknown dissimilarity kind: " + k);
        *out = new lc_measure_field{heuristic_measure(H->data, d)};
    });
}

lc_status lc_classifier_measure(const lc_meaning_field* P, lc_measure_field** out) {
    return guarded([&] {
        require(P && out, "bad arguments");
        *out = new lc_measure_field{classifier_measure(P->data)};
    });
}

lc_status lc_jsd_distance(const double* p, const double* q, int32_t d, double* out) {
    return guarded([&] {
        require(p && q && out && d > 0, "bad arguments");
        *out = jsd_distance(p, q, d);
    });
}

lc_status lc_gaussian_blur(const lc_measure_field* m, double sigma_cells, lc_measure_field** out) {
    return guarded([&] {
        require(m && out, "bad arguments");
        *out = new lc_measure_field{gaussian_blur(m->data, sigma_cells)};
    });
}

lc_status lc_relax_to_mean(const lc_measure_field* m, const lc_embeddings* e, double sigma_relax,
                           lc_measure_field** out) {
    return guarded([&] {
        require(m && e && out, "bad arguments");
        *out = new lc_measure_field{relax_to_mean(m->data, e->data, sigma_relax)};
    });
}

/* ---- transform ---- */

void lc_diffusion_params_default(lc_diffusion_params* out) {
    if (!out) return;
    DiffusionParams p;
    *out = lc_diffusion_params{p.pad_factor,  p.density_floor_rel,     p.convergence_tol,
                               p.max_time_factor, p.rk_safety, p.max_step_displacement,
                               p.step_error_tol};
}

lc_status lc_solve_transform(const lc_measure_field* m, const lc_diffusion_params* params,
                             lc_transform_field** out) {
    return guarded([&] {
        require(m && out, "bad arguments");
        DiffusionParams p;
        if (params) {
            p.pad_factor = params->pad_factor;
            p.density_floor_rel = params->density_floor_rel;
            p.convergence_tol = params->convergence_tol;
            p.max_time_factor = params->max_time_factor;
            p.rk_safety = params->rk_safety;
            p.max_step_displacement = params->max_step_displacement;
            p.step_error_tol = params->step_error_tol;
        }
        *out = new lc_transform_field{solve_transform(m->data, p)};
    });
}

void lc_transform_free(lc_transform_field* t) { delete t; }

lc_status lc_transform_info(const lc_transform_field* t, lc_grid_spec* spec,
                            lc_solve_diagnostics* diag) {
    return guarded([&] {
        require(t, "bad arguments");
        if (spec) *spec = to_c(t->data.spec);
        if (diag) {
            const SolveDiagnostics& d = t->data.diag;
            *diag = lc_solve_diagnostics{d.padded_size,
                                         d.steps_accepted,
                                         d.steps_rejected,
                                         d.final_time,
                                         d.horizon_time,
                                         d.final_step_increment_cells,
                                         d.max_displacement_cells};
        }
    });
}

const double* lc_transform_positions(const lc_transform_field* t) {
    return t ? t->data.positions.data() : nullptr;
}

lc_status lc_identity_transform(const lc_grid_spec* spec, lc_transform_field** out) {
    return guarded([&] {
        require(spec && out, "bad arguments");
        *out = new lc_transform_field{identity_transform(from_c(*spec))};
    });
}

lc_status lc_transform_save(const char* path, const lc_transform_field* t) {
    return guarded([&] {
        require(path && t, "bad arguments");
        save_field(path, t->data);
    });
}

lc_status lc_transform_load(const char* path, lc_transform_field** out) {
    return guarded([&] {
        require(path && out, "bad arguments");
        auto* t = new lc_transform_field;
        try {
            t->data = load_transform(path);
        } catch (...) {
            delete t;
            throw;
        }
        *out = t;
    });
}

lc_status lc_forward_map(const lc_transform_field* t, const double* pts, int64_t n, double* out) {
    return guarded([&] {
        require(t && pts && out && n >= 0, "bad arguments");
        for (int64_t i = 0; i < n; ++i) {
            Point p = forward_map(t->data, {pts[2 * i], pts[2 * i + 1]});
            out[2 * i] = p[0];
            out[2 * i + 1] = p[1];
        }
    });
}

lc_status lc_inverse_map(const lc_transform_field* t, const double* pts, int64_t n, double* out) {
    return guarded([&] {
        require(t && pts && out && n >= 0, "bad arguments");
        for (int64_t i = 0; i < n; ++i) {
            Point p = inverse_map(t->data, {pts[2 * i], pts[2 * i + 1]});
            out[2 * i] = p[0];
            out[2 * i + 1] = p[1];
        }
    });
}

lc_status lc_cell_density_after(const lc_measure_field* m, const lc_transform_field* t,
                                lc_measure_field** out) {
    return guarded([&] {
        require(m && t && out, "bad arguments");
        *out = new lc_measure_field{cell_density_after(m->data, t->data)};
    });
}

lc_status lc_transform_stats(const lc_measure_field* m, const lc_transform_field* t,
                             double* cv_before, double* cv_after, double* area_ratio) {
    return guarded([&] {
        require(m && t && cv_before && cv_after && area_ratio, "bad arguments");
        transform_stats(m->data, t->data, *cv_before, *cv_after, *area_ratio);
    });
}

/* ---- geometry ---- */

lc_status lc_pseudo_geodesic(const lc_transform_field* t, const double a[2], const double b[2],
                             int32_t n_points, double* z_out, double* zt_out, double* cum_out,
                             double* length_out) {
    return guarded([&] {
        require(t && a && b && z_out, "bad arguments");
        LatentPath path = pseudo_geodesic(t->data, {a[0], a[1]}, {b[0], b[1]}, n_points);
        for (int k = 0; k < n_points; ++k) {
            z_out[2 * k] = path.z_points[k][0];
            z_out[2 * k + 1] = path.z_points[k][1];
            if (zt_out) {
                zt_out[2 * k] = path.zt_points[k][0];
                zt_out[2 * k + 1] = path.zt_points[k][1];
            }
            if (cum_out) cum_out[k] = path.cum_length[k];
        }
        if (length_out) *length_out = path.length();
    });
}

lc_status lc_transformed_path_length(const lc_transform_field* t, const double* pts, int64_t n,
                                     double* out) {
    return guarded([&] {
        require(t && pts && out && n >= 0, "bad arguments");
        std::vector<Point> v(n);
        for (int64_t i = 0; i < n; ++i) v[i] = {pts[2 * i], pts[2 * i + 1]};
        *out = transformed_path_length(t->data, v);
    });
}

lc_status lc_distance_field(const lc_transform_field* t, const double z0[2],
                            lc_measure_field** out) {
    return guarded([&] {
        require(t && z0 && out, "bad arguments");
        *out = new lc_measure_field{distance_field(t->data, {z0[0], z0[1]})};
    });
}

lc_status lc_transform_embeddings(const lc_transform_field* t, const lc_embeddings* e,
                                  int32_t inverse, lc_embeddings** out) {
    return guarded([&] {
        require(t && e && out, "bad arguments");
        *out = new lc_embeddings{transform_embeddings(t->data, e->data, inverse != 0)};
    });
}

/* ---- evaluation ---- */

lc_status lc_histogram_entropy(const lc_embeddings* e, int32_t bins_per_axis, double* out) {
    return guarded([&] {
        require(e && out, "bad arguments");
        *out = histogram_entropy(e->data, bins_per_axis);
    });
}

lc_status lc_kmeans_f1(const lc_embeddings* e, int32_t k, uint64_t seed, int32_t restarts,
                       double* f1_out, int32_t* assignments) {
    return guarded([&] {
        require(e && f1_out, "bad arguments");
        int kk = k;
        if (kk == 0) {
            require(e->data.labeled(), "k = 0 needs labeled embeddings");
            std::set<std::string> classes(e->data.labels.begin(), e->data.labels.end());
            kk = static_cast<int>(classes.size());
        }
        KMeansResult res = kmeans_f1(e->data, kk, seed, restarts);
        *f1_out = res.f1;
        if (assignments)
            for (std::size_t i = 0; i < res.assignments.size(); ++i)
                assignments[i] = res.assignments[i];
    });
}

lc_status lc_fit_classifier_field(const lc_embeddings* e, const lc_grid_spec* spec,
                                  double l2_penalty, int32_t max_iters, lc_meaning_field** out,
                                  int32_t* converged) {
    return guarded([&] {
        require(e && spec && out, "bad arguments");
        ClassifierFit fit = fit_classifier_field(e->data, from_c(*spec), l2_penalty, max_iters);
        if (converged) *converged = fit.converged ? 1 : 0;
        *out = new lc_meaning_field{std::move(fit.field)};
    });
}

lc_status lc_equalization_report(const lc_measure_field* m, const lc_transform_field* t,
                                 const lc_embeddings* before, const lc_embeddings* after,
                                 int32_t bins, uint64_t seed, int32_t restarts,
                                 lc_eval_report* out) {
    return guarded([&] {
        require(m && t && before && after && out, "bad arguments");
        EvalReport rep = equalization_report(m->data, t->data, before->data, after->data, bins,
                                             seed, restarts);
        out->entropy_before = rep.entropy_before;
        out->entropy_after = rep.entropy_after;
        out->has_f1 = rep.f1_before.has_value() ? 1 : 0;
        out->f1_before = rep.f1_before.value_or(0.0);
        out->f1_after = rep.f1_after.value_or(0.0);
        out->density_cv_before = rep.density_cv_before;
        out->density_cv_after = rep.density_cv_after;
        out->area_ratio = rep.area_ratio;
    });
}

/* ---- rendering ---- */

lc_status lc_render_svg(const lc_measure_field* measure, const lc_embeddings* embeddings,
                        const double* const* paths, const int64_t* path_lens, int32_t n_paths,
                        const lc_measure_field* dist, int32_t width, int32_t height,
                        const char* contrast, const char* colormap, const double* contour_levels,
                        int32_t n_levels, char** svg_out) {
    return guarded([&] {
        require(svg_out, "bad arguments");
        RenderSpec spec;
        spec.width = width;
        spec.height = height;
        std::string c = contrast ? contrast : "linear";
        if (c == "linear")
            spec.contrast = Contrast::linear;
        else if (c == "sqrt")
            spec.contrast = Contrast::sqrt;
        else
            throw InputError("unknown contrast: " + c);
        spec.colormap = colormap ? colormap : "red";
        if (contour_levels && n_levels > 0)
            spec.contour_levels.assign(contour_levels, contour_levels + n_levels);
        std::vector<LatentPath> path_objs;
        if (paths && path_lens && n_paths > 0) {
            path_objs.resize(n_paths);
            for (int32_t p = 0; p < n_paths; ++p) {
                require(paths[p] && path_lens[p] >= 2, "each path needs at least 2 points");
                path_objs[p].z_points.resize(path_lens[p]);
                for (int64_t k = 0; k < path_lens[p]; ++k)
                    path_objs[p].z_points[k] = {paths[p][2 * k], paths[p][2 * k + 1]};
            }
        }
        if (measure) spec.layers.push_back(RenderLayer::heatmap);
        if (dist) spec.layers.push_back(RenderLayer::contours);
        if (!path_objs.empty()) spec.layers.push_back(RenderLayer::paths);
        if (embeddings) spec.layers.push_back(RenderLayer::scatter);
        std::string svg = render_scene(measure ? &measure->data : nullptr,
                                       embeddings ? &embeddings->data : nullptr,
                                       path_objs.empty() ? nullptr : &path_objs,
                                       dist ? &dist->data : nullptr, spec);
        char* buf = static_cast<char*>(std::malloc(svg.size() + 1));
        if (!buf) throw InputError("out of memory");
        std::memcpy(buf, svg.data(), svg.size() + 1);
        *svg_out = buf;
    });
}

/* ---- fixtures ---- */

lc_status lc_fixture_analytic_meaning(const char* name, const lc_grid_spec* spec,
                                      lc_meaning_field** out) {
    return guarded([&] {
        require(name && spec && out, "bad arguments");
        *out = new lc_meaning_field{make_analytic_meaning(name, from_c(*spec))};
    });
}

lc_status lc_fixture_distorted_mixture(int32_t n_per_class, int32_t classes, double squash,
                                       uint64_t seed, lc_embeddings** emb_out,
                                       lc_measure_field** measure_out) {
    return guarded([&] {
        require(emb_out && measure_out, "bad arguments");
        MixtureFixture fx = make_distorted_mixture(n_per_class, classes, squash, seed);
        *emb_out = new lc_embeddings{std::move(fx.embeddings)};
        *measure_out = new lc_measure_field{std::move(fx.true_measure)};
    });
}

lc_status lc_fixture_bump_density(const lc_grid_spec* spec, const double* centers,
                                  const double* sigmas, const double* amplitudes, int32_t k,
                                  lc_measure_field** out) {
    return guarded([&] {
        require(spec && out && k >= 0, "bad arguments");
        require(k == 0 || (centers && sigmas && amplitudes), "bad arguments");
        std::vector<Point> cs(k);
        for (int32_t b = 0; b < k; ++b) cs[b] = {centers[2 * b], centers[2 * b + 1]};
        *out = new lc_measure_field{make_bump_density(
            from_c(*spec), cs, std::vector<double>(sigmas, sigmas + k),
            std::vector<double>(amplitudes, amplitudes + k))};
    });
}

} // extern "C"
