#pragma once

#include <string>

#include "core/geometry.hpp"
#include "core/grid.hpp"

namespace latcart {

enum class Contrast { linear, sqrt };
enum class RenderLayer { heatmap, contours, paths, scatter };

struct RenderSpec {
    int width = 640, height = 640;
    Contrast contrast = Contrast::linear;
    std::string colormap = "red"; // red | black | blue (white-to-hue ramps)
    std::vector<RenderLayer> layers;
    std::vector<double> contour_levels;
};

// One polyline of a marching-squares contour, in world coordinates.
struct ContourLine {
    std::vector<Point> points;
    bool closed = false;
};

// Iso-contours of a scalar field at one level, by marching squares over
// the cell-center lattice with linear edge interpolation. Saddles resolve
// by the average-of-corners rule.
std::vector<ContourLine> marching_squares(const MeasureField& field, double level);

// Deterministic SVG 1.1 document. Layers draw in the given order; each
// needs its data present. measure and dist must share a grid when both
// are given.
std::string render_scene(const MeasureField* measure, const EmbeddingSet* embeddings,
                         const std::vector<LatentPath>* paths, const MeasureField* dist,
                         const RenderSpec& spec);

} // namespace latcart
