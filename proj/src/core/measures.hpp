#pragma once

#include "core/grid.hpp"

namespace latcart {

// Finite-difference Jacobian of the meaning map at one cell, with the
// pulled-back metric tensor M = J^T J.
struct JacobianAtCell {
    int i = 0, j = 0;
    std::vector<double> jac;        // dh x 2, row-major: [dh/dz1, dh/dz2] per component
    std::array<double, 4> metric{}; // 2x2 row-major
};

enum class DissimilarityKind { jsd, euclidean, cosine };

// Central differences on interior cells, one-sided at the boundary.
JacobianAtCell finite_diff_jacobian(const MeaningField& H, int i, int j);

// sqrt(det J^T J) per cell; negative round-off determinants clamp to 0.
MeasureField riemannian_measure(const MeaningField& H);

// Jensen-Shannon distance, natural log; inputs renormalized internally.
double jsd_distance(const std::vector<double>& p, const std::vector<double>& q);
double jsd_distance(const double* p, const double* q, int d);

// Mean dissimilarity to the 4-connected grid neighbors.
MeasureField heuristic_measure(const MeaningField& H, DissimilarityKind d);

// heuristic_measure with the Jensen-Shannon distance over p(c|z).
MeasureField classifier_measure(const MeaningField& P);

// Separable Gaussian convolution, kernel truncated at 4*sigma and
// renormalized per output cell over in-bounds taps. sigma in cells.
MeasureField gaussian_blur(const MeasureField& m, double sigma_cells);

// m'(c) = w*m(c) + (1-w)*mean(m), w = exp(-d^2 / (2 sigma^2)) with d the
// distance from the cell center to the nearest embedding point.
MeasureField relax_to_mean(const MeasureField& m, const EmbeddingSet& e, double sigma_relax);

} // namespace latcart
