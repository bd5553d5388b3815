#include "core/fixtures.hpp"

#include <cmath>

#include "core/rng.hpp"

namespace latcart {

MeaningField make_analytic_meaning(const std::string& name, const GridSpec& spec) {
    validate_grid(spec);
    MeaningField f;
    f.spec = spec;
    auto fill = [&](int dh, auto&& map) {
        f.dh = dh;
        f.values.resize(spec.cells() * dh);
        for (int i = 0; i < spec.n1; ++i)
            for (int j = 0; j < spec.n2; ++j) map(cell_center(spec, i, j), f.cell(i, j));
    };
    if (name == "identity") {
        fill(2, [](Point z, double* h) {
            h[0] = z[0];
            h[1] = z[1];
        });
    } else if (name == "affine") {
        fill(2, [](Point z, double* h) {
            h[0] = 3.0 * z[0];
            h[1] = 2.0 * z[1];
        });
    } else if (name == "parabola") {
        fill(3, [](Point z, double* h) {
            h[0] = z[0];
            h[1] = z[1];
            h[2] = z[0] * z[0];
        });
    } else if (name == "sine") {
        fill(2, [](Point z, double* h) {
            h[0] = std::sin(z[0]);
            h[1] = std::cos(z[1]);
        });
    } else {
        throw InputError("unknown analytic meaning map: " + name);
    }
    return f;
}

MixtureFixture make_distorted_mixture(int n_per_class, int classes, double squash,
                                      std::uint64_t seed) {
    if (classes < 2 || classes > 8) throw InputError("classes must be in [2, 8]");
    if (n_per_class < 1) throw InputError("n_per_class must be >= 1");
    if (!(squash >= 0)) throw InputError("squash must be >= 0");

    std::vector<double> radii(classes), sigmas(classes);
    radii[0] = 0.55;
    sigmas[0] = 0.09;
    for (int k = 1; k < classes; ++k) {
        radii[k] = classes == 2 ? 1.45 : 1.45 + (3.2 - 1.45) * (k - 1) / (classes - 2);
        sigmas[k] = 0.07;
    }

    MixtureFixture fx;
    fx.embeddings.xy.reserve(2 * static_cast<std::size_t>(n_per_class) * classes);
    for (int k = 0; k < classes; ++k) {
        CounterRng rng(seed, static_cast<std::uint64_t>(k));
        for (int i = 0; i < n_per_class; ++i) {
            double g1, g2;
            rng.next_gaussian_pair(g1, g2);
            double x = radii[k] + sigmas[k] * g1;
            double y = sigmas[k] * g2;
            double r = std::hypot(x, y);
            double scale = 1.0 / (1.0 + squash * r);
            fx.embeddings.xy.push_back(x * scale);
            fx.embeddings.xy.push_back(y * scale);
            fx.embeddings.labels.push_back(std::to_string(k));
        }
    }

    fx.spec = build_grid(fx.embeddings, 128, 128, 0.05);
    fx.true_measure.spec = fx.spec;
    fx.true_measure.values.resize(fx.spec.cells());
    const double r_cap = squash > 0 ? 0.98 / squash : 0.0;
    for (int i = 0; i < fx.spec.n1; ++i)
        for (int j = 0; j < fx.spec.n2; ++j) {
            Point z = cell_center(fx.spec, i, j);
            double r = std::hypot(z[0], z[1]);
            if (squash > 0) r = std::min(r, r_cap);
            double one_minus = 1.0 - squash * r;
            fx.true_measure.at(i, j) = 1.0 / (one_minus * one_minus * one_minus);
        }
    return fx;
}

MeasureField make_bump_density(const GridSpec& spec, const std::vector<Point>& centers,
                               const std::vector<double>& sigmas,
                               const std::vector<double>& amplitudes) {
    validate_grid(spec);
    if (centers.size() != sigmas.size() || centers.size() != amplitudes.size())
        throw InputError("centers, sigmas, amplitudes must have equal length");
    for (double s : sigmas)
        if (!(s > 0)) throw InputError("bump sigmas must be > 0");
    MeasureField m;
    m.spec = spec;
    m.values.assign(spec.cells(), 1.0);
    for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j) {
            Point z = cell_center(spec, i, j);
            double acc = 1.0;
            for (std::size_t b = 0; b < centers.size(); ++b) {
                double dx = z[0] - centers[b][0], dy = z[1] - centers[b][1];
                acc += amplitudes[b] * std::exp(-0.5 * (dx * dx + dy * dy) / (sigmas[b] * sigmas[b]));
            }
            m.at(i, j) = acc;
        }
    return m;
}

} // namespace latcart
