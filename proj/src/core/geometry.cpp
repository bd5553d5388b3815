#include "core/geometry.hpp"

#include <cmath>
#include <string>

namespace latcart {

LatentPath pseudo_geodesic(const TransformField& t, Point z_a, Point z_b, int n_points) {
    if (n_points < 2) throw InputError("pseudo-geodesic needs n_points >= 2");
    Point ta = forward_map(t, z_a);
    Point tb = forward_map(t, z_b);
    double total = std::hypot(tb[0] - ta[0], tb[1] - ta[1]);
    LatentPath path;
    path.z_points.resize(n_points);
    path.zt_points.resize(n_points);
    path.cum_length.resize(n_points);
    for (int k = 0; k < n_points; ++k) {
        double s = static_cast<double>(k) / (n_points - 1);
        Point zt{ta[0] + s * (tb[0] - ta[0]), ta[1] + s * (tb[1] - ta[1])};
        path.zt_points[k] = zt;
        path.cum_length[k] = s * total;
        if (k == 0) {
            path.z_points[k] = z_a;
        } else if (k == n_points - 1) {
            path.z_points[k] = z_b;
        } else {
            try {
                path.z_points[k] = inverse_map(t, zt);
            } catch (const DomainError& e) {
                throw DomainError("pseudo-geodesic sample " + std::to_string(k) + ": " + e.what());
            } catch (const SolverError& e) {
                throw SolverError("pseudo-geodesic sample " + std::to_string(k) + ": " + e.what());
            }
        }
    }
    // endpoint images must be invertible even though we keep the exact inputs
    if (n_points >= 2) {
        inverse_map(t, path.zt_points.front());
        inverse_map(t, path.zt_points.back());
    }
    return path;
}

double transformed_path_length(const TransformField& t, const std::vector<Point>& pts) {
    double acc = 0.0;
    Point prev{};
    for (std::size_t k = 0; k < pts.size(); ++k) {
        Point cur = forward_map(t, pts[k]);
        if (k > 0) acc += std::hypot(cur[0] - prev[0], cur[1] - prev[1]);
        prev = cur;
    }
    return acc;
}

MeasureField distance_field(const TransformField& t, Point z0) {
    Point t0 = forward_map(t, z0);
    MeasureField out;
    out.spec = t.spec;
    out.values.resize(t.spec.cells());
    for (int i = 0; i < t.spec.n1; ++i)
        for (int j = 0; j < t.spec.n2; ++j) {
            Point p = t.at(i, j);
            out.at(i, j) = std::hypot(p[0] - t0[0], p[1] - t0[1]);
        }
    return out;
}

EmbeddingSet transform_embeddings(const TransformField& t, const EmbeddingSet& e, bool inverse) {
    validate_embeddings(e);
    EmbeddingSet out;
    out.labels = e.labels;
    out.xy.resize(e.xy.size());
    std::string bad;
    for (std::int64_t i = 0; i < e.size(); ++i) {
        try {
            Point p = inverse ? inverse_map(t, e.point(i)) : forward_map(t, e.point(i));
            out.xy[2 * i] = p[0];
            out.xy[2 * i + 1] = p[1];
        } catch (const DomainError&) {
            if (!bad.empty()) bad += ", ";
            bad += std::to_string(i);
        }
    }
    if (!bad.empty()) throw DomainError("points outside the transform domain at indices: " + bad);
    return out;
}

} // namespace latcart
