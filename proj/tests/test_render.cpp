#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "core/geometry.hpp"
#include "core/render.hpp"

using namespace latcart;

TEST_SUITE_BEGIN("render");

namespace {

RenderSpec basic_spec(std::vector<RenderLayer> layers) {
    RenderSpec s;
    s.width = 320;
    s.height = 320;
    s.layers = std::move(layers);
    return s;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("constant heatmap renders one color everywhere") {
    MeasureField m;
    m.spec = make_grid(0, 1, 0, 1, 8, 8);
    m.values.assign(64, 3.0);
    std::string svg = render_scene(&m, nullptr, nullptr, nullptr,
                                   basic_spec({RenderLayer::heatmap}));
    std::set<std::string> fills;
    for (const std::string& line : lines_of(svg)) {
        auto pos = line.find("fill=\"#");
        if (pos != std::string::npos && line.find("<rect x") != std::string::npos)
            fills.insert(line.substr(pos + 6, 9));
    }
    CHECK(fills.size() == 1);
}

TEST_CASE("rendering is deterministic byte for byte") {
    MeasureField m;
    m.spec = make_grid(0, 1, 0, 1, 12, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) m.values.push_back(std::sin(i * 0.7) + 1.5 + 0.1 * j);
    EmbeddingSet e{{0.2, 0.3, 0.8, 0.1, 0.5, 0.9}, {"a", "b", "a"}};
    RenderSpec spec = basic_spec({RenderLayer::heatmap, RenderLayer::scatter});
    std::string a = render_scene(&m, &e, nullptr, nullptr, spec);
    std::string b = render_scene(&m, &e, nullptr, nullptr, spec);
    CHECK(a == b);
    CHECK(a.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") == 0);
}

TEST_CASE("sqrt and linear contrast differ only in fill colors") {
    MeasureField m;
    m.spec = make_grid(0, 1, 0, 1, 6, 6);
    for (int k = 0; k < 36; ++k) m.values.push_back(static_cast<double>(k));
    RenderSpec lin = basic_spec({RenderLayer::heatmap});
    RenderSpec sq = lin;
    sq.contrast = Contrast::sqrt;
    auto la = lines_of(render_scene(&m, nullptr, nullptr, nullptr, lin));
    auto lb = lines_of(render_scene(&m, nullptr, nullptr, nullptr, sq));
    REQUIRE(la.size() == lb.size());
    bool any_diff = false;
    for (std::size_t k = 0; k < la.size(); ++k) {
        if (la[k] == lb[k]) continue;
        any_diff = true;
        // the lines may differ only in the fill attribute
        auto strip = [](std::string s) {
            auto pos = s.find("fill=\"");
            if (pos != std::string::npos) {
                auto end = s.find('"', pos + 6);
                s.erase(pos, end - pos + 1);
            }
            return s;
        };
        CHECK(strip(la[k]) == strip(lb[k]));
    }
    CHECK(any_diff);
}

TEST_CASE("sqrt contrast keeps the cellwise color ordering") {
    MeasureField m;
    m.spec = make_grid(0, 1, 0, 1, 3, 1);
    m.values = {0.1, 0.5, 0.9};
    for (Contrast c : {Contrast::linear, Contrast::sqrt}) {
        RenderSpec s = basic_spec({RenderLayer::heatmap});
        s.contrast = c;
        s.colormap = "black";
        std::string svg = render_scene(&m, nullptr, nullptr, nullptr, s);
        // darker = larger value for the black ramp: extract the three fills
        std::vector<int> shades;
        for (const std::string& line : lines_of(svg)) {
            auto pos = line.find("fill=\"#");
            if (pos == std::string::npos || line.find("<rect x") == std::string::npos) continue;
            shades.push_back(std::stoi(line.substr(pos + 7, 2), nullptr, 16));
        }
        REQUIRE(shades.size() == 3);
        CHECK(shades[0] > shades[1]);
        CHECK(shades[1] > shades[2]);
    }
}

TEST_CASE("marching squares approximates a circle on a distance field") {
    GridSpec g = make_grid(-1, 1, -1, 1, 64, 64);
    TransformField id = identity_transform(g);
    MeasureField d = distance_field(id, {0.0, 0.0});
    const double r = 0.6;
    auto lines = marching_squares(d, r);
    REQUIRE(!lines.empty());
    double half_diag = 0.5 * std::hypot(g.dz1(), g.dz2());
    std::size_t vertices = 0;
    for (const auto& line : lines) {
        for (Point p : line.points) {
            CHECK(std::fabs(std::hypot(p[0], p[1]) - r) <= half_diag);
            ++vertices;
        }
    }
    CHECK(vertices > 32);
}

TEST_CASE("contour polylines close or end on the lattice boundary") {
    GridSpec g = make_grid(0, 1, 0, 1, 24, 24);
    MeasureField f;
    f.spec = g;
    f.values.resize(g.cells());
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) {
            Point z = cell_center(g, i, j);
            f.at(i, j) = std::sin(6 * z[0]) * std::cos(5 * z[1]);
        }
    double lo1 = g.min1 + 0.5 * g.dz1(), hi1 = g.max1 - 0.5 * g.dz1();
    double lo2 = g.min2 + 0.5 * g.dz2(), hi2 = g.max2 - 0.5 * g.dz2();
    for (double level : {-0.4, 0.0, 0.35}) {
        for (const auto& line : marching_squares(f, level)) {
            REQUIRE(line.points.size() >= 2);
            if (line.closed) {
                CHECK(line.points.front()[0] == line.points.back()[0]);
                CHECK(line.points.front()[1] == line.points.back()[1]);
            } else {
                for (Point tip : {line.points.front(), line.points.back()}) {
                    bool on_edge = std::fabs(tip[0] - lo1) < 1e-9 || std::fabs(tip[0] - hi1) < 1e-9 ||
                                   std::fabs(tip[1] - lo2) < 1e-9 || std::fabs(tip[1] - hi2) < 1e-9;
                    CHECK(on_edge);
                }
            }
        }
    }
}

TEST_CASE("render input validation") {
    RenderSpec empty = basic_spec({});
    CHECK_THROWS_AS(render_scene(nullptr, nullptr, nullptr, nullptr, empty), InputError);
    MeasureField m;
    m.spec = make_grid(0, 1, 0, 1, 4, 4);
    m.values.assign(16, 1.0);
    RenderSpec tiny = basic_spec({RenderLayer::heatmap});
    tiny.width = 32;
    CHECK_THROWS_AS(render_scene(&m, nullptr, nullptr, nullptr, tiny), InputError);
    MeasureField other;
    other.spec = make_grid(0, 2, 0, 2, 4, 4);
    other.values.assign(16, 1.0);
    RenderSpec both = basic_spec({RenderLayer::heatmap, RenderLayer::contours});
    both.contour_levels = {0.5};
    CHECK_THROWS_AS(render_scene(&m, nullptr, nullptr, &other, both), InputError);
    RenderSpec bad_levels = basic_spec({RenderLayer::heatmap});
    bad_levels.contour_levels = {0.5, 0.5};
    CHECK_THROWS_AS(render_scene(&m, nullptr, nullptr, nullptr, bad_levels), InputError);
}

TEST_CASE("paths and unlabeled scatter render without a field") {
    EmbeddingSet e{{0.0, 0.0, 1.0, 1.0}, {}};
    std::vector<LatentPath> paths(1);
    paths[0].z_points = {{0.0, 0.0}, {0.5, 0.8}, {1.0, 1.0}};
    std::string svg = render_scene(nullptr, &e, &paths, nullptr,
                                   basic_spec({RenderLayer::paths, RenderLayer::scatter}));
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
}

TEST_SUITE_END();
