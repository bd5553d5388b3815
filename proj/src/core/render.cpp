#include "core/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "core/io.hpp"

namespace latcart {

namespace {

struct Rgb {
    int r, g, b;
};

Rgb ramp_base(const std::string& name) {
    if (name == "red") return {178, 24, 43};
    if (name == "black") return {0, 0, 0};
    if (name == "blue") return {33, 102, 172};
    throw InputError("unknown colormap: " + name);
}

std::string hex_color(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

// white -> base, t in [0, 1]
std::string ramp_color(Rgb base, double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto mix = [&](int hue) { return static_cast<int>(std::llround(255.0 + t * (hue - 255.0))); };
    return hex_color({mix(base.r), mix(base.g), mix(base.b)});
}

const char* kScatterPalette[8] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

} // namespace

std::vector<ContourLine> marching_squares(const MeasureField& field, double level) {
    validate_measure(field, false);
    const int n1 = field.spec.n1, n2 = field.spec.n2;
    if (n1 < 2 || n2 < 2) return {};
    // global edge ids over the node (cell-center) lattice
    auto h_edge = [&](int i, int j) { return static_cast<std::int64_t>(i) * n2 + j; };
    const std::int64_t h_count = static_cast<std::int64_t>(n1 - 1) * n2;
    auto v_edge = [&](int i, int j) {
        return h_count + static_cast<std::int64_t>(i) * (n2 - 1) + j;
    };
    auto edge_point = [&](std::int64_t id) -> Point {
        int i, j;
        bool horizontal = id < h_count;
        if (horizontal) {
            i = static_cast<int>(id / n2);
            j = static_cast<int>(id % n2);
        } else {
            std::int64_t v = id - h_count;
            i = static_cast<int>(v / (n2 - 1));
            j = static_cast<int>(v % (n2 - 1));
        }
        Point a = cell_center(field.spec, i, j);
        Point b = horizontal ? cell_center(field.spec, i + 1, j) : cell_center(field.spec, i, j + 1);
        double va = field.at(i, j);
        double vb = horizontal ? field.at(i + 1, j) : field.at(i, j + 1);
        double t = (level - va) / (vb - va);
        return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    };
    auto on_boundary = [&](std::int64_t id) {
        if (id < h_count) {
            int j = static_cast<int>(id % n2);
            return j == 0 || j == n2 - 1;
        }
        std::int64_t v = id - h_count;
        int i = static_cast<int>(v / (n2 - 1));
        return i == 0 || i == n1 - 1;
    };

    std::vector<std::pair<std::int64_t, std::int64_t>> segments;
    for (int i = 0; i + 1 < n1; ++i) {
        for (int j = 0; j + 1 < n2; ++j) {
            double v00 = field.at(i, j), v10 = field.at(i + 1, j);
            double v01 = field.at(i, j + 1), v11 = field.at(i + 1, j + 1);
            int code = (v00 >= level) | ((v10 >= level) << 1) | ((v11 >= level) << 2) |
                       ((v01 >= level) << 3);
            if (code == 0 || code == 15) continue;
            std::int64_t left = v_edge(i, j);         // (i,j)-(i,j+1)
            std::int64_t right = v_edge(i + 1, j);    // (i+1,j)-(i+1,j+1)
            std::int64_t bottom = h_edge(i, j);       // (i,j)-(i+1,j)
            std::int64_t top = h_edge(i, j + 1);      // (i,j+1)-(i+1,j+1)
            auto add = [&](std::int64_t a, std::int64_t b) { segments.emplace_back(a, b); };
            switch (code) {
                case 1: case 14: add(left, bottom); break;
                case 2: case 13: add(bottom, right); break;
                case 3: case 12: add(left, right); break;
                case 4: case 11: add(right, top); break;
                case 6: case 9: add(bottom, top); break;
                case 7: case 8: add(left, top); break;
                case 5:
                case 10: {
                    bool center_in = 0.25 * (v00 + v10 + v01 + v11) >= level;
                    bool corners_in = code == 5; // (i,j) and (i+1,j+1) inside
                    if (center_in == corners_in) {
                        add(left, bottom);
                        add(right, top);
                    } else {
                        add(left, top);
                        add(bottom, right);
                    }
                    break;
                }
            }
        }
    }

    std::map<std::int64_t, std::vector<std::size_t>> by_edge;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        by_edge[segments[s].first].push_back(s);
        by_edge[segments[s].second].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<ContourLine> lines;
    for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
        if (used[s0]) continue;
        std::vector<std::int64_t> chain{segments[s0].first, segments[s0].second};
        used[s0] = true;
        // extend forward, then backward
        for (int dir = 0; dir < 2; ++dir) {
            while (true) {
                std::int64_t tip = dir == 0 ? chain.back() : chain.front();
                const auto& cand = by_edge[tip];
                std::size_t next = segments.size();
                for (std::size_t s : cand)
                    if (!used[s]) {
                        next = s;
                        break;
                    }
                if (next == segments.size()) break;
                used[next] = true;
                std::int64_t other =
                    segments[next].first == tip ? segments[next].second : segments[next].first;
                if (dir == 0)
                    chain.push_back(other);
                else
                    chain.insert(chain.begin(), other);
            }
        }
        ContourLine line;
        line.closed = chain.size() > 2 && chain.front() == chain.back();
        if (!line.closed && !(on_boundary(chain.front()) && on_boundary(chain.back()))) {
            // open chains must terminate on the lattice boundary; with the
            // saddle rule above they always do, but keep them drawable
        }
        line.points.reserve(chain.size());
        for (std::int64_t id : chain) line.points.push_back(edge_point(id));
        lines.push_back(std::move(line));
    }
    return lines;
}

std::string render_scene(const MeasureField* measure, const EmbeddingSet* embeddings,
                         const std::vector<LatentPath>* paths, const MeasureField* dist,
                         const RenderSpec& spec) {
    if (spec.width < 64 || spec.height < 64) throw InputError("canvas must be at least 64x64");
    for (std::size_t i = 1; i < spec.contour_levels.size(); ++i)
        if (!(spec.contour_levels[i] > spec.contour_levels[i - 1]))
            throw InputError("contour levels must be strictly increasing");
    for (double l : spec.contour_levels)
        if (!(l > 0)) throw InputError("contour levels must be positive");
    if (measure && dist && !(measure->spec == dist->spec))
        throw InputError("measure and distance fields live on different grids");

    bool any = false;
    for (RenderLayer layer : spec.layers) {
        switch (layer) {
            case RenderLayer::heatmap: any |= measure != nullptr; break;
            case RenderLayer::contours: any |= dist != nullptr; break;
            case RenderLayer::paths: any |= paths != nullptr && !paths->empty(); break;
            case RenderLayer::scatter: any |= embeddings != nullptr; break;
        }
    }
    if (!any) throw InputError("no layer has data to render");

    // world rectangle
    double wmin1, wmax1, wmin2, wmax2;
    if (measure || dist) {
        const GridSpec& g = measure ? measure->spec : dist->spec;
        wmin1 = g.min1;
        wmax1 = g.max1;
        wmin2 = g.min2;
        wmax2 = g.max2;
    } else {
        wmin1 = wmin2 = std::numeric_limits<double>::infinity();
        wmax1 = wmax2 = -std::numeric_limits<double>::infinity();
        auto grow = [&](Point p) {
            wmin1 = std::min(wmin1, p[0]);
            wmax1 = std::max(wmax1, p[0]);
            wmin2 = std::min(wmin2, p[1]);
            wmax2 = std::max(wmax2, p[1]);
        };
        if (embeddings)
            for (std::int64_t i = 0; i < embeddings->size(); ++i) grow(embeddings->point(i));
        if (paths)
            for (const LatentPath& p : *paths)
                for (Point q : p.z_points) grow(q);
        if (wmax1 <= wmin1) { wmin1 -= 0.5; wmax1 += 0.5; }
        if (wmax2 <= wmin2) { wmin2 -= 0.5; wmax2 += 0.5; }
        double s1 = wmax1 - wmin1, s2 = wmax2 - wmin2;
        wmin1 -= 0.05 * s1; wmax1 += 0.05 * s1;
        wmin2 -= 0.05 * s2; wmax2 += 0.05 * s2;
    }
    const double W = spec.width, H = spec.height;
    auto px = [&](double z1) { return (z1 - wmin1) / (wmax1 - wmin1) * W; };
    auto py = [&](double z2) { return H - (z2 - wmin2) / (wmax2 - wmin2) * H; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
           "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
           std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    for (RenderLayer layer : spec.layers) {
        if (layer == RenderLayer::heatmap && measure) {
            const GridSpec& g = measure->spec;
            // block cells when the grid outresolves the canvas
            int f1 = std::max(1, (g.n1 + spec.width - 1) / spec.width);
            int f2 = std::max(1, (g.n2 + spec.height - 1) / spec.height);
            int b1 = (g.n1 + f1 - 1) / f1, b2 = (g.n2 + f2 - 1) / f2;
            std::vector<double> blocks(static_cast<std::int64_t>(b1) * b2, 0.0);
            double vmax = 0.0;
            for (int bi = 0; bi < b1; ++bi)
                for (int bj = 0; bj < b2; ++bj) {
                    double acc = 0.0;
                    int cnt = 0;
                    for (int i = bi * f1; i < std::min((bi + 1) * f1, g.n1); ++i)
                        for (int j = bj * f2; j < std::min((bj + 1) * f2, g.n2); ++j) {
                            acc += measure->at(i, j);
                            ++cnt;
                        }
                    double v = acc / cnt;
                    blocks[static_cast<std::int64_t>(bi) * b2 + bj] = v;
                    vmax = std::max(vmax, v);
                }
            Rgb base = ramp_base(spec.colormap);
            svg += "<g id=\"heatmap\" shape-rendering=\"crispEdges\">\n";
            for (int bi = 0; bi < b1; ++bi)
                for (int bj = 0; bj < b2; ++bj) {
                    double v = blocks[static_cast<std::int64_t>(bi) * b2 + bj];
                    double t = vmax > 0 ? v / vmax : 0.0;
                    if (spec.contrast == Contrast::sqrt) t = std::sqrt(t);
                    double x0 = g.min1 + bi * f1 * g.dz1();
                    double x1 = g.min1 + std::min((bi + 1) * f1, g.n1) * g.dz1();
                    double y0 = g.min2 + bj * f2 * g.dz2();
                    double y1 = g.min2 + std::min((bj + 1) * f2, g.n2) * g.dz2();
                    svg += "<rect x=\"" + format_double(px(x0)) + "\" y=\"" +
                           format_double(py(y1)) + "\" width=\"" + format_double(px(x1) - px(x0)) +
                           "\" height=\"" + format_double(py(y0) - py(y1)) + "\" fill=\"" +
                           ramp_color(base, t) + "\"/>\n";
                }
            svg += "</g>\n";
        } else if (layer == RenderLayer::contours && dist) {
            svg += "<g id=\"contours\" fill=\"none\" stroke=\"#404040\" stroke-width=\"1\">\n";
            for (double level : spec.contour_levels) {
                for (const ContourLine& line : marching_squares(*dist, level)) {
                    svg += "<polyline points=\"";
                    for (std::size_t k = 0; k < line.points.size(); ++k) {
                        if (k) svg += ' ';
                        svg += format_double(px(line.points[k][0])) + "," +
                               format_double(py(line.points[k][1]));
                    }
                    svg += "\"/>\n";
                }
            }
            svg += "</g>\n";
        } else if (layer == RenderLayer::paths && paths) {
            svg += "<g id=\"paths\" fill=\"none\" stroke-width=\"1.5\">\n";
            int idx = 0;
            for (const LatentPath& p : *paths) {
                const char* stroke = idx == 0 ? "#000000" : kScatterPalette[3];
                svg += "<polyline stroke=\"" + std::string(stroke) + "\" points=\"";
                for (std::size_t k = 0; k < p.z_points.size(); ++k) {
                    if (k) svg += ' ';
                    svg += format_double(px(p.z_points[k][0])) + "," +
                           format_double(py(p.z_points[k][1]));
                }
                svg += "\"/>\n";
                ++idx;
            }
            svg += "</g>\n";
        } else if (layer == RenderLayer::scatter && embeddings) {
            std::map<std::string, int> color_of;
            if (embeddings->labeled()) {
                std::set<std::string> labs(embeddings->labels.begin(), embeddings->labels.end());
                int c = 0;
                for (const std::string& lab : labs) color_of[lab] = c++ % 8;
            }
            svg += "<g id=\"scatter\" stroke=\"none\">\n";
            for (std::int64_t i = 0; i < embeddings->size(); ++i) {
                Point p = embeddings->point(i);
                const char* fill = embeddings->labeled()
                                       ? kScatterPalette[color_of[embeddings->labels[i]]]
                                       : "#555555";
                svg += "<circle cx=\"" + format_double(px(p[0])) + "\" cy=\"" +
                       format_double(py(p[1])) + "\" r=\"2.5\" fill=\"" + fill + "\"/>\n";
            }
            svg += "</g>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace latcart
