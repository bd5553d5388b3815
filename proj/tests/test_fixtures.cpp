#include <doctest.h>

#include <cmath>

#include "core/fixtures.hpp"
#include "core/measures.hpp"

using namespace latcart;

TEST_SUITE_BEGIN("fixtures");

TEST_CASE("analytic meaning oracles feed the riemannian measure") {
    GridSpec g = make_grid(-1, 1, -1, 1, 10, 10);
    for (double v : riemannian_measure(make_analytic_meaning("identity", g)).values)
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : riemannian_measure(make_analytic_meaning("affine", g)).values)
        CHECK(v == doctest::Approx(6.0).epsilon(1e-12));
    MeasureField pb = riemannian_measure(make_analytic_meaning("parabola", g));
    CHECK(pb.at(7, 3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(make_analytic_meaning("spiral", g), InputError);
}

TEST_CASE("mixture fixture is deterministic for a fixed seed") {
    MixtureFixture a = make_distorted_mixture(50, 4, 2.0, 7);
    MixtureFixture b = make_distorted_mixture(50, 4, 2.0, 7);
    CHECK(a.embeddings.xy == b.embeddings.xy);
    CHECK(a.embeddings.labels == b.embeddings.labels);
    CHECK(a.true_measure.values == b.true_measure.values);
    MixtureFixture c = make_distorted_mixture(50, 4, 2.0, 8);
    CHECK(a.embeddings.xy != c.embeddings.xy);
}

TEST_CASE("mixture measure is the analytic inverse-map magnification") {
    MixtureFixture fx = make_distorted_mixture(40, 3, 2.0, 1);
    const GridSpec& g = fx.spec;
    for (int i = 0; i < g.n1; i += 7)
        for (int j = 0; j < g.n2; j += 7) {
            Point z = cell_center(g, i, j);
            double r = std::min(std::hypot(z[0], z[1]), 0.49);
            double expect = std::pow(1.0 - 2.0 * r, -3.0);
            CHECK(fx.true_measure.at(i, j) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("mixture measure is radially symmetric as a function of |z|") {
    MixtureFixture fx = make_distorted_mixture(40, 4, 2.0, 3);
    // two interior points at the same radius sample to the same value
    // within bilinear interpolation tolerance
    double r = 0.35;
    Point a{r, 0.0};
    // stay inside the thin grid: rotate only slightly
    double theta = 0.08;
    Point b{r * std::cos(theta), r * std::sin(theta)};
    double va = bilinear_sample_scalar(fx.true_measure, a);
    double vb = bilinear_sample_scalar(fx.true_measure, b);
    double h = std::max(fx.spec.dz1(), fx.spec.dz2());
    // interpolation error bound ~ h^2 * |m''|; generous envelope
    double m2 = 12.0 * 2.0 * 2.0 * std::pow(1 - 2 * r, -5.0);
    CHECK(std::fabs(va - vb) <= m2 * h * h + 1e-9);
}

TEST_CASE("squash to zero gives the unit measure") {
    MixtureFixture fx = make_distorted_mixture(30, 2, 1e-8, 5);
    for (double v : fx.true_measure.values) CHECK(std::fabs(v - 1.0) <= 1e-6);
}

TEST_CASE("squashed points stay inside the rim disk and the grid") {
    MixtureFixture fx = make_distorted_mixture(100, 4, 2.0, 7);
    for (std::int64_t i = 0; i < fx.embeddings.size(); ++i) {
        Point p = fx.embeddings.point(i);
        CHECK(std::hypot(p[0], p[1]) < 0.5);
        CHECK(p[0] >= fx.spec.min1);
        CHECK(p[0] <= fx.spec.max1);
        CHECK(p[1] >= fx.spec.min2);
        CHECK(p[1] <= fx.spec.max2);
    }
    CHECK(fx.embeddings.labels.front() == "0");
    CHECK(fx.embeddings.labels.back() == "3");
}

TEST_CASE("mixture parameter validation") {
    CHECK_THROWS_AS(make_distorted_mixture(10, 1, 2.0, 0), InputError);
    CHECK_THROWS_AS(make_distorted_mixture(10, 9, 2.0, 0), InputError);
    CHECK_THROWS_AS(make_distorted_mixture(0, 4, 2.0, 0), InputError);
    CHECK_THROWS_AS(make_distorted_mixture(10, 4, -1.0, 0), InputError);
}

TEST_CASE("bump density: zero amplitudes, symmetry, additivity") {
    GridSpec g = make_grid(0, 1, 0, 1, 16, 16);
    MeasureField flat = make_bump_density(g, {}, {}, {});
    for (double v : flat.values) CHECK(v == 1.0);

    MeasureField one = make_bump_density(g, {{0.5, 0.5}}, {0.2}, {3.0});
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            CHECK(one.at(i, j) == doctest::Approx(one.at(15 - i, j)).epsilon(1e-12));
            CHECK(one.at(i, j) == doctest::Approx(one.at(i, 15 - j)).epsilon(1e-12));
        }

    MeasureField a = make_bump_density(g, {{0.3, 0.3}}, {0.1}, {2.0});
    MeasureField b = make_bump_density(g, {{0.7, 0.6}}, {0.15}, {1.0});
    MeasureField ab = make_bump_density(g, {{0.3, 0.3}, {0.7, 0.6}}, {0.1, 0.15}, {2.0, 1.0});
    for (std::int64_t c = 0; c < g.cells(); ++c)
        CHECK(ab.values[c] == doctest::Approx(a.values[c] + b.values[c] - 1.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_bump_density(g, {{0.5, 0.5}}, {0.2, 0.3}, {1.0}), InputError);
    CHECK_THROWS_AS(make_bump_density(g, {{0.5, 0.5}}, {0.0}, {1.0}), InputError);
}

TEST_SUITE_END();
