#pragma once

#include "core/grid.hpp"

namespace latcart {

// Closed-form meaning maps sampled at cell centers. Names:
//   identity  h = z
//   affine    h = A z with A = [[3,0],[0,2]]
//   parabola  h = (z1, z2, z1^2)
//   sine      h = (sin z1, cos z2)
MeaningField make_analytic_meaning(const std::string& name, const GridSpec& spec);

struct MixtureFixture {
    EmbeddingSet embeddings; // squashed points with class labels "0".."K-1"
    MeasureField true_measure;
    GridSpec spec;
};

// Well-separated Gaussian blobs pushed through the radial squashing map
// s(z) = z / (1 + squash |z|). Returns the squashed embeddings plus the
// analytic Riemannian measure of the inverse map, (1 - squash r)^-3
// (capped at r = 0.98/squash), sampled on a 128x128 grid covering the
// squashed data. Blob layout: class 0 at radius 0.55 (sigma 0.09), the
// rest at radii evenly spaced in [1.45, 3.2] (sigma 0.07), centers on the
// +x axis. With squash about 2 the outer blobs crowd the disk rim, which
// is what the equalizing transform is supposed to undo.
MixtureFixture make_distorted_mixture(int n_per_class, int classes, double squash,
                                      std::uint64_t seed);

// 1 + sum_j amplitudes[j] * exp(-|z - centers[j]|^2 / (2 sigmas[j]^2)).
MeasureField make_bump_density(const GridSpec& spec, const std::vector<Point>& centers,
                               const std::vector<double>& sigmas,
                               const std::vector<double>& amplitudes);

} // namespace latcart
