#include "core/cartogram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "core/spectral.hpp"
#include "core/threading.hpp"

namespace latcart {

void validate_params(const DiffusionParams& p) {
    if (!(p.pad_factor >= 1.5)) throw InputError("pad_factor must be >= 1.5");
    if (!(p.density_floor_rel > 0)) throw InputError("density_floor_rel must be > 0");
    if (!(p.convergence_tol > 0)) throw InputError("convergence_tol must be > 0");
    if (!(p.max_time_factor > 0)) throw InputError("max_time_factor must be > 0");
    if (!(p.rk_safety > 0)) throw InputError("rk_safety must be > 0");
    if (!(p.max_step_displacement > 0)) throw InputError("max_step_displacement must be > 0");
    if (!(p.step_error_tol > 0)) throw InputError("step_error_tol must be > 0");
}

void validate_transform(const TransformField& t) {
    validate_grid(t.spec);
    if (static_cast<std::int64_t>(t.positions.size()) != t.spec.cells() * 2)
        throw InputError("transform position count does not match n1*n2*2");
    for (double v : t.positions)
        if (!std::isfinite(v)) throw InputError("transform positions must be finite");
}

TransformField identity_transform(const GridSpec& spec) {
    validate_grid(spec);
    TransformField t;
    t.spec = spec;
    t.positions.resize(spec.cells() * 2);
    for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j) {
            Point c = cell_center(spec, i, j);
            double* p = t.positions.data() + (static_cast<std::int64_t>(i) * spec.n2 + j) * 2;
            p[0] = c[0];
            p[1] = c[1];
        }
    return t;
}

MeasureField floored_density(const MeasureField& m, double density_floor_rel) {
    validate_measure(m);
    double mean = 0.0;
    for (double v : m.values) mean += v;
    mean /= static_cast<double>(m.values.size());
    if (!(mean > 0)) throw InputError("measure must not be identically zero");
    MeasureField out = m;
    double floor = density_floor_rel * mean;
    for (double& v : out.values) v = std::max(v, floor);
    return out;
}

std::vector<double> quad_signed_areas(const TransformField& t) {
    const int n1 = t.spec.n1, n2 = t.spec.n2;
    std::vector<double> areas(static_cast<std::int64_t>(n1 - 1) * (n2 - 1));
    for (int i = 0; i + 1 < n1; ++i) {
        for (int j = 0; j + 1 < n2; ++j) {
            Point a = t.at(i, j), b = t.at(i + 1, j), c = t.at(i + 1, j + 1), d = t.at(i, j + 1);
            areas[static_cast<std::int64_t>(i) * (n2 - 1) + j] =
                0.5 * ((a[0] * b[1] - b[0] * a[1]) + (b[0] * c[1] - c[0] * b[1]) +
                       (c[0] * d[1] - d[0] * c[1]) + (d[0] * a[1] - a[0] * d[1]));
        }
    }
    return areas;
}

namespace {

struct PaddedFrame {
    int L;
    double dz1, dz2;
    double pmin1, pmin2; // lower corner of the padded domain
};

int next_pow2(int x) {
    int L = 1;
    while (L < x) L *= 2;
    return L;
}

// Clamped bilinear lookup on the padded lattice of cell centers.
inline void sample_padded(const PaddedFrame& f, const std::vector<double>& rho,
                          const std::vector<double>& gx, const std::vector<double>& gy,
                          double rho_floor, double x, double y, double& vx, double& vy) {
    double u = (x - f.pmin1) / f.dz1 - 0.5;
    double v = (y - f.pmin2) / f.dz2 - 0.5;
    u = std::clamp(u, 0.0, static_cast<double>(f.L - 1));
    v = std::clamp(v, 0.0, static_cast<double>(f.L - 1));
    int i0 = std::min(static_cast<int>(u), f.L - 2);
    int j0 = std::min(static_cast<int>(v), f.L - 2);
    double fu = u - i0, fv = v - j0;
    double w00 = (1 - fu) * (1 - fv), w10 = fu * (1 - fv), w01 = (1 - fu) * fv, w11 = fu * fv;
    std::int64_t c00 = static_cast<std::int64_t>(i0) * f.L + j0;
    std::int64_t c10 = c00 + f.L, c01 = c00 + 1, c11 = c10 + 1;
    double r = w00 * rho[c00] + w10 * rho[c10] + w01 * rho[c01] + w11 * rho[c11];
    double dx = w00 * gx[c00] + w10 * gx[c10] + w01 * gx[c01] + w11 * gx[c11];
    double dy = w00 * gy[c00] + w10 * gy[c10] + w01 * gy[c01] + w11 * gy[c11];
    r = std::max(r, rho_floor);
    vx = -dx / r;
    vy = -dy / r;
}

} // namespace

TransformField solve_transform(const MeasureField& m, const DiffusionParams& params) {
    validate_params(params);
    MeasureField rho0 = floored_density(m, params.density_floor_rel);
    const GridSpec& spec = m.spec;
    if (spec.n1 < 2 || spec.n2 < 2)
        throw InputError("transform needs at least 2 cells per axis");

    double mean_floored = 0.0;
    for (double v : rho0.values) mean_floored += v;
    mean_floored /= static_cast<double>(rho0.values.size());
    const double rho_floor = params.density_floor_rel * mean_floored;

    const int L = next_pow2(static_cast<int>(
        std::ceil(params.pad_factor * std::max(spec.n1, spec.n2))));
    const int off1 = (L - spec.n1) / 2, off2 = (L - spec.n2) / 2;
    PaddedFrame frame{L, spec.dz1(), spec.dz2(), spec.min1 - off1 * spec.dz1(),
                      spec.min2 - off2 * spec.dz2()};

    std::vector<double> padded(static_cast<std::int64_t>(L) * L, mean_floored);
    for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j)
            padded[static_cast<std::int64_t>(i + off1) * L + (j + off2)] = rho0.at(i, j);

    HeatSolution heat(std::move(padded), L, frame.dz1, frame.dz2, rho_floor);
    const double t_max = params.max_time_factor * std::log(10.0) / heat.lambda_min();
    const double cw = std::min(frame.dz1, frame.dz2);

    const std::int64_t np = spec.cells();
    std::vector<double> X(np * 2);
    for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j) {
            Point c = cell_center(spec, i, j);
            X[(static_cast<std::int64_t>(i) * spec.n2 + j) * 2] = c[0];
            X[(static_cast<std::int64_t>(i) * spec.n2 + j) * 2 + 1] = c[1];
        }

    std::vector<double> k1(np * 2), k2(np * 2), k3(np * 2), k4(np * 2), d4(np * 2);

    auto stage = [&](const std::vector<double>& base, const std::vector<double>* dir, double scale,
                     double t, std::vector<double>& out) {
        auto snap = heat.at_time(t);
        const std::vector<double>&rho = snap->rho, &gx = snap->gx, &gy = snap->gy;
        parallel_for(np, [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t p = b; p < e; ++p) {
                double x = base[2 * p], y = base[2 * p + 1];
                if (dir) {
                    x += scale * (*dir)[2 * p];
                    y += scale * (*dir)[2 * p + 1];
                }
                sample_padded(frame, rho, gx, gy, rho_floor, x, y, out[2 * p], out[2 * p + 1]);
            }
        });
    };

    SolveDiagnostics diag;
    diag.padded_size = L;
    diag.horizon_time = t_max;

    double t = 0.0;
    double v0 = heat.at_time(0.0)->max_speed;
    double h = v0 > 0 ? std::min(0.5 * params.max_step_displacement * cw / v0, t_max) : t_max;

    while (true) {
        double mv = heat.at_time(t)->max_speed;
        if (mv * (t_max - t) < params.convergence_tol * cw || t >= t_max) break;
        h = std::min(h, t_max - t);

        stage(X, nullptr, 0.0, t, k1);
        stage(X, &k1, 0.5 * h, t + 0.5 * h, k2);
        stage(X, &k2, 0.5 * h, t + 0.5 * h, k3);
        stage(X, &k3, h, t + h, k4);
        std::vector<double> err_acc(max_threads(), 0.0), disp_acc(max_threads(), 0.0);
        std::atomic<int> widx{0};
        parallel_for(np, [&](std::int64_t b, std::int64_t e) {
            int me = widx.fetch_add(1);
            double lerr = 0.0, ldisp = 0.0;
            for (std::int64_t p = b; p < e; ++p) {
                double mx = h * (k1[2 * p] + 2 * k2[2 * p] + 2 * k3[2 * p] + k4[2 * p]) / 6.0;
                double my =
                    h * (k1[2 * p + 1] + 2 * k2[2 * p + 1] + 2 * k3[2 * p + 1] + k4[2 * p + 1]) / 6.0;
                d4[2 * p] = mx;
                d4[2 * p + 1] = my;
                double ex = mx - h * k2[2 * p], ey = my - h * k2[2 * p + 1];
                lerr = std::max(lerr, ex * ex + ey * ey);
                ldisp = std::max(ldisp, mx * mx + my * my);
            }
            err_acc[me] = std::max(err_acc[me], lerr);
            disp_acc[me] = std::max(disp_acc[me], ldisp);
        });
        double err = std::sqrt(*std::max_element(err_acc.begin(), err_acc.end())) / cw;
        double disp = std::sqrt(*std::max_element(disp_acc.begin(), disp_acc.end())) / cw;

        double se = err > 0 ? params.rk_safety * std::cbrt(params.step_error_tol / err) : 5.0;
        double sd = disp > 0 ? 0.9 * params.max_step_displacement / disp : 5.0;
        if (err <= params.step_error_tol && disp <= params.max_step_displacement) {
            parallel_for(np, [&](std::int64_t b, std::int64_t e) {
                for (std::int64_t p = b; p < e; ++p) {
                    X[2 * p] += d4[2 * p];
                    X[2 * p + 1] += d4[2 * p + 1];
                }
            });
            t += h;
            ++diag.steps_accepted;
            diag.final_step_increment_cells = disp;
            h *= std::min(5.0, std::max(0.2, std::min(se, sd)));
        } else {
            ++diag.steps_rejected;
            h *= std::min(0.9, std::max(0.1, std::min(se, sd)));
        }
    }
    diag.final_time = t;

    TransformField out;
    out.spec = spec;
    out.positions = std::move(X);
    double maxdisp = 0.0;
    for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j) {
            Point c = cell_center(spec, i, j);
            Point p = out.at(i, j);
            maxdisp = std::max(maxdisp, std::hypot(p[0] - c[0], p[1] - c[1]));
        }
    diag.max_displacement_cells = maxdisp / cw;
    out.diag = diag;

    auto areas = quad_signed_areas(out);
    std::int64_t inverted = 0;
    for (double a : areas)
        if (!(a > 0)) ++inverted;
    if (inverted > 0)
        throw SolverError("mesh inversion at convergence: " + std::to_string(inverted) +
                          " inverted quads of " + std::to_string(areas.size()) + " (steps=" +
                          std::to_string(diag.steps_accepted) + ", t=" +
                          std::to_string(diag.final_time) + ")");
    return out;
}

Point forward_map(const TransformField& t, Point z) {
    Point out;
    bilinear_sample(t.spec, t.positions.data(), 2, z, out.data());
    return out;
}

namespace {

// Newton on one bilinear patch. Returns (alpha, beta), possibly outside
// [0,1]^2; residual_cells receives the final |F| in cell widths.
bool invert_patch(const TransformField& t, int qi, int qj, Point zt, double& alpha, double& beta,
                  double& residual_cells, int max_iters) {
    Point p00 = t.at(qi, qj), p10 = t.at(qi + 1, qj);
    Point p01 = t.at(qi, qj + 1), p11 = t.at(qi + 1, qj + 1);
    double cw = std::min(t.spec.dz1(), t.spec.dz2());
    double a = 0.5, b = 0.5;
    residual_cells = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
        double w00 = (1 - a) * (1 - b), w10 = a * (1 - b), w01 = (1 - a) * b, w11 = a * b;
        double fx = w00 * p00[0] + w10 * p10[0] + w01 * p01[0] + w11 * p11[0] - zt[0];
        double fy = w00 * p00[1] + w10 * p10[1] + w01 * p01[1] + w11 * p11[1] - zt[1];
        residual_cells = std::hypot(fx, fy) / cw;
        if (residual_cells <= 1e-12) break;
        double dxa = (p10[0] - p00[0]) * (1 - b) + (p11[0] - p01[0]) * b;
        double dxb = (p01[0] - p00[0]) * (1 - a) + (p11[0] - p10[0]) * a;
        double dya = (p10[1] - p00[1]) * (1 - b) + (p11[1] - p01[1]) * b;
        double dyb = (p01[1] - p00[1]) * (1 - a) + (p11[1] - p10[1]) * a;
        double det = dxa * dyb - dxb * dya;
        if (det == 0.0) {
            alpha = a;
            beta = b;
            return false;
        }
        a -= (fx * dyb - fy * dxb) / det;
        b -= (fy * dxa - fx * dya) / det;
        // keep the walk informative but bounded
        a = std::clamp(a, -8.0, 9.0);
        b = std::clamp(b, -8.0, 9.0);
    }
    alpha = a;
    beta = b;
    return residual_cells <= 1e-12;
}

} // namespace

Point inverse_map(const TransformField& t, Point zt) {
    validate_transform(t);
    const GridSpec& spec = t.spec;
    if (spec.n1 < 2 || spec.n2 < 2) throw InputError("inverse map needs at least 2 cells per axis");
    const int nq1 = spec.n1 - 1, nq2 = spec.n2 - 1;
    const double in_tol = 1e-9;

    // seed: the quad of the untransformed coordinate
    double u = (zt[0] - spec.min1) / spec.dz1() - 0.5;
    double v = (zt[1] - spec.min2) / spec.dz2() - 0.5;
    int qi = std::clamp(static_cast<int>(std::floor(u)), 0, nq1 - 1);
    int qj = std::clamp(static_cast<int>(std::floor(v)), 0, nq2 - 1);

    auto result_from = [&](int i, int j, double a, double b) -> Point {
        Point c = cell_center(spec, i, j);
        return {c[0] + a * spec.dz1(), c[1] + b * spec.dz2()};
    };

    double alpha = 0.5, beta = 0.5, res = 0.0;
    int walk_budget = 2 * (spec.n1 + spec.n2) + 8;
    for (int step = 0; step < walk_budget; ++step) {
        bool ok = invert_patch(t, qi, qj, zt, alpha, beta, res, 30);
        if (ok && alpha >= -in_tol && alpha <= 1 + in_tol && beta >= -in_tol && beta <= 1 + in_tol)
            return result_from(qi, qj, alpha, beta);
        if (!ok) break; // singular patch: go exhaustive
        int ni = qi + (alpha > 1 ? 1 : (alpha < 0 ? -1 : 0));
        int nj = qj + (beta > 1 ? 1 : (beta < 0 ? -1 : 0));
        ni = std::clamp(ni, 0, nq1 - 1);
        nj = std::clamp(nj, 0, nq2 - 1);
        if (ni == qi && nj == qj) break; // pinned at the mesh edge: scan
        qi = ni;
        qj = nj;
    }

    // exhaustive fallback; robust for non-convex quads since it relies on
    // the Newton solution, not a containment predicate
    for (int i = 0; i < nq1; ++i) {
        for (int j = 0; j < nq2; ++j) {
            if (invert_patch(t, i, j, zt, alpha, beta, res, 30) && alpha >= -in_tol &&
                alpha <= 1 + in_tol && beta >= -in_tol && beta <= 1 + in_tol)
                return result_from(i, j, alpha, beta);
        }
    }
    throw DomainError("point outside the image of the transformed cell-center mesh");
}

MeasureField cell_density_after(const MeasureField& m, const TransformField& t) {
    validate_measure(m);
    validate_transform(t);
    if (!(m.spec == t.spec)) throw InputError("measure and transform grids differ");
    if (m.spec.n1 < 2 || m.spec.n2 < 2)
        throw InputError("density diagnostic needs at least 2 cells per axis");
    MeasureField floored = floored_density(m, 1e-8);
    auto areas = quad_signed_areas(t);
    const int n1 = m.spec.n1, n2 = m.spec.n2;
    const double cell_area = m.spec.dz1() * m.spec.dz2();
    MeasureField out;
    out.spec = m.spec;
    out.values.resize(m.spec.cells());
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            int qi = std::min(i, n1 - 2), qj = std::min(j, n2 - 2);
            double area = areas[static_cast<std::int64_t>(qi) * (n2 - 1) + qj];
            if (!(area > 0)) throw SolverError("degenerate transformed quad at (" +
                                               std::to_string(qi) + "," + std::to_string(qj) + ")");
            out.at(i, j) = floored.at(i, j) * cell_area / area;
        }
    }
    return out;
}

} // namespace latcart
