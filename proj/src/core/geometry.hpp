#pragma once

#include "core/cartogram.hpp"

namespace latcart {

// A path in latent space together with its image in the transformed space
// and the cumulative Euclidean length measured there.
struct LatentPath {
    std::vector<Point> z_points;
    std::vector<Point> zt_points;
    std::vector<double> cum_length;

    double length() const { return cum_length.empty() ? 0.0 : cum_length.back(); }
};

// Straight segment between T(z_a) and T(z_b) sampled at n_points equally
// spaced positions, pulled back through the inverse transform. The first
// and last pulled-back points are replaced by the exact endpoints.
LatentPath pseudo_geodesic(const TransformField& t, Point z_a, Point z_b, int n_points);

// Sum of transformed segment lengths along the given polyline.
double transformed_path_length(const TransformField& t, const std::vector<Point>& pts);

// Per cell: Euclidean distance in the transformed space from T(z_0).
MeasureField distance_field(const TransformField& t, Point z0);

// Pointwise forward (or inverse) map; labels carried through.
EmbeddingSet transform_embeddings(const TransformField& t, const EmbeddingSet& e,
                                  bool inverse = false);

} // namespace latcart
