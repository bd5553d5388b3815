#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace latcart {

using Point = std::array<double, 2>;

// Axis-aligned rectangular grid over latent space, uniform per axis.
// Cell (i, j) is 0-based, row-major with axis 1 outermost; its center is
// (min1 + (i+0.5)*dz1, min2 + (j+0.5)*dz2).
struct GridSpec {
    double min1 = 0.0, max1 = 1.0;
    double min2 = 0.0, max2 = 1.0;
    int n1 = 1, n2 = 1;

    double dz1() const { return (max1 - min1) / n1; }
    double dz2() const { return (max2 - min2) / n2; }
    std::int64_t cells() const { return static_cast<std::int64_t>(n1) * n2; }
    bool operator==(const GridSpec&) const = default;
};

// Throws InputError unless bounds are ordered and counts positive.
void validate_grid(const GridSpec& spec);

GridSpec make_grid(double min1, double max1, double min2, double max2, int n1, int n2);

// Labeled or unlabeled latent points. xy is flat [x0,y0,x1,y1,...];
// labels is empty or one entry per point.
struct EmbeddingSet {
    std::vector<double> xy;
    std::vector<std::string> labels;

    std::int64_t size() const { return static_cast<std::int64_t>(xy.size()) / 2; }
    bool labeled() const { return !labels.empty(); }
    Point point(std::int64_t i) const { return {xy[2 * i], xy[2 * i + 1]}; }
};

// Throws InputError on non-finite coordinates or label/point count mismatch.
void validate_embeddings(const EmbeddingSet& e);

// N1 x N2 x dh tensor of per-cell meaning vectors, row-major with the
// component axis innermost. distribution = true means every cell vector is
// entrywise >= 0 and sums to 1 (checked to 1e-9).
struct MeaningField {
    GridSpec spec;
    int dh = 0;
    bool distribution = false;
    std::vector<double> values;

    const double* cell(int i, int j) const {
        return values.data() + (static_cast<std::int64_t>(i) * spec.n2 + j) * dh;
    }
    double* cell(int i, int j) {
        return values.data() + (static_cast<std::int64_t>(i) * spec.n2 + j) * dh;
    }
};

void validate_meaning(const MeaningField& f);

// N1 x N2 scalar field (measures, distance fields).
struct MeasureField {
    GridSpec spec;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::int64_t>(i) * spec.n2 + j]; }
    double& at(int i, int j) { return values[static_cast<std::int64_t>(i) * spec.n2 + j]; }
};

void validate_measure(const MeasureField& f, bool require_nonneg = true);

Point cell_center(const GridSpec& spec, int i, int j);

// Smallest grid covering the embeddings, each side expanded by
// pad_fraction x (side length). A zero-width axis is first widened to 1,
// centered on the data.
GridSpec build_grid(const EmbeddingSet& e, int n1, int n2, double pad_fraction);

// Bilinear interpolation between the four surrounding cell centers; inside
// the half-cell margin between boundary centers and the grid edge the
// lattice is clamped (constant extrapolation toward the edge).
// values has `dim` components per cell; writes `dim` doubles to out.
// Throws DomainError when z lies outside the grid bounds.
void bilinear_sample(const GridSpec& spec, const double* values, int dim, Point z, double* out);

double bilinear_sample_scalar(const MeasureField& f, Point z);
std::vector<double> bilinear_sample_vector(const MeaningField& f, Point z);

struct Sample {
    Point z;
    std::vector<double> h;
};

struct AggregateResult {
    MeaningField field;
    // true where the cell had no samples and was filled by nearest-neighbor
    // propagation (nearest filled cell center, ties to smaller (i,j)).
    std::vector<std::uint8_t> imputed;
};

AggregateResult aggregate_samples_to_grid(const std::vector<Sample>& samples, const GridSpec& spec);

// Index of the cell containing z (closed bounds; max edge maps to the last
// cell). Throws DomainError outside the bounds.
std::array<int, 2> cell_of(const GridSpec& spec, Point z);

} // namespace latcart
