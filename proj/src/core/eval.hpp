#pragma once

#include <optional>

#include "core/cartogram.hpp"

namespace latcart {

struct EvalReport {
    double entropy_before = 0.0, entropy_after = 0.0;
    // Defined only when the embeddings carry labels.
    std::optional<double> f1_before, f1_after;
    double density_cv_before = 0.0, density_cv_after = 0.0;
    double area_ratio = 1.0;
};

// Shannon entropy (nats) of the normalized bin counts of a
// bins_per_axis^2 histogram over the data bounding box.
double histogram_entropy(const EmbeddingSet& e, int bins_per_axis);

struct KMeansResult {
    double f1 = 0.0;
    std::vector<int> assignments;
    double inertia = 0.0;
};

// k-means (k-means++ seeding from a counter-based stream keyed by seed,
// best inertia over restarts), clusters mapped to their majority label,
// macro-averaged F1 of the induced classification.
KMeansResult kmeans_f1(const EmbeddingSet& e, int k, std::uint64_t seed, int restarts);

struct ClassifierFit {
    MeaningField field; // p(c | z) at every cell center, class axis sorted by label
    std::vector<std::string> classes;
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0.0;
    std::vector<double> loss_history;
};

// Multinomial logistic regression on (1, z1, z2, z1^2, z1 z2, z2^2) by
// full-batch gradient descent with backtracking line search.
ClassifierFit fit_classifier_field(const EmbeddingSet& e, const GridSpec& spec, double l2_penalty,
                                   int max_iters = 5000);

double coefficient_of_variation(const std::vector<double>& values);

// Equalization statistics: density CV before (floored m) and after
// (cell_density_after), plus the quad-area / cell-area ratio.
void transform_stats(const MeasureField& m, const TransformField& t, double& cv_before,
                     double& cv_after, double& area_ratio);

EvalReport equalization_report(const MeasureField& m, const TransformField& t,
                               const EmbeddingSet& before, const EmbeddingSet& after, int bins,
                               std::uint64_t seed = 0, int restarts = 10);

} // namespace latcart
