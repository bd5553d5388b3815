#include <doctest.h>

#include <cmath>

#include "core/eval.hpp"
#include "core/fixtures.hpp"
#include "core/rng.hpp"

using namespace latcart;

TEST_SUITE_BEGIN("eval");

namespace {

EmbeddingSet two_blobs(int n_per, double sep, double sigma, std::uint64_t seed) {
    EmbeddingSet e;
    CounterRng rng(seed);
    for (int side = 0; side < 2; ++side) {
        double cx = side == 0 ? -sep / 2 : sep / 2;
        for (int k = 0; k < n_per; ++k) {
            double g1, g2;
            rng.next_gaussian_pair(g1, g2);
            e.xy.push_back(cx + sigma * g1);
            e.xy.push_back(sigma * g2);
            e.labels.push_back(side == 0 ? "left" : "right");
        }
    }
    return e;
}

} // namespace

TEST_CASE("histogram entropy hand values") {
    EmbeddingSet one{{0.5, 0.5, 0.5001, 0.5001, 0.4999, 0.5}, {}};
    CHECK(histogram_entropy(one, 1) == 0.0);

    // K^2 points, one per bin of a KxK histogram
    const int K = 4;
    EmbeddingSet grid;
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) {
            grid.xy.push_back((i + 0.5) / K);
            grid.xy.push_back((j + 0.5) / K);
        }
    CHECK(histogram_entropy(grid, K) == doctest::Approx(std::log(K * K)).epsilon(1e-12));

    EmbeddingSet two{{0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0}, {}};
    CHECK(histogram_entropy(two, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(histogram_entropy(EmbeddingSet{}, 4), InputError);
    CHECK_THROWS_AS(histogram_entropy(two, 0), InputError);
}

TEST_CASE("histogram entropy: translation invariance and the log bound") {
    CounterRng rng(5);
    EmbeddingSet e;
    for (int k = 0; k < 300; ++k) {
        e.xy.push_back(rng.next_double() * 3);
        e.xy.push_back(rng.next_double());
    }
    double h = histogram_entropy(e, 8);
    EmbeddingSet shifted = e;
    for (std::size_t i = 0; i < shifted.xy.size(); i += 2) {
        shifted.xy[i] += 17.5;
        shifted.xy[i + 1] -= 4.25;
    }
    CHECK(histogram_entropy(shifted, 8) == doctest::Approx(h).epsilon(1e-9));
    CHECK(h <= std::log(64.0) + 1e-12);
    // labels play no role
    EmbeddingSet labeled = e;
    labeled.labels.assign(e.size(), "x");
    CHECK(histogram_entropy(labeled, 8) == h);
}

TEST_CASE("kmeans_f1: separated blobs score 1.0") {
    EmbeddingSet e = two_blobs(60, 8.0, 0.4, 3);
    KMeansResult r = kmeans_f1(e, 2, 0, 10);
    CHECK(r.f1 == doctest::Approx(1.0));
    REQUIRE(r.assignments.size() == 120);
    // all same-label points share a cluster
    for (int k = 1; k < 60; ++k) CHECK(r.assignments[k] == r.assignments[0]);
}

TEST_CASE("kmeans_f1: single label with k=1") {
    EmbeddingSet e;
    CounterRng rng(9);
    for (int k = 0; k < 40; ++k) {
        e.xy.push_back(rng.next_double());
        e.xy.push_back(rng.next_double());
        e.labels.push_back("only");
    }
    CHECK(kmeans_f1(e, 1, 0, 3).f1 == doctest::Approx(1.0));
}

TEST_CASE("kmeans_f1 determinism and label-name invariance") {
    EmbeddingSet e = two_blobs(50, 5.0, 0.8, 11);
    KMeansResult a = kmeans_f1(e, 2, 42, 10);
    KMeansResult b = kmeans_f1(e, 2, 42, 10);
    CHECK(a.f1 == b.f1);
    CHECK(a.assignments == b.assignments);
    CHECK(a.inertia == b.inertia);
    EmbeddingSet renamed = e;
    for (auto& lab : renamed.labels) lab = lab == "left" ? "zebra" : "aardvark";
    KMeansResult c = kmeans_f1(renamed, 2, 42, 10);
    CHECK(c.f1 == a.f1);
}

TEST_CASE("kmeans_f1 input validation") {
    EmbeddingSet unlabeled{{0, 0, 1, 1}, {}};
    CHECK_THROWS_AS(kmeans_f1(unlabeled, 2, 0, 5), InputError);
    EmbeddingSet tiny{{0, 0, 1, 1}, {"a", "b"}};
    CHECK_THROWS_AS(kmeans_f1(tiny, 3, 0, 5), InputError);
}

TEST_CASE("classifier field: wide-margin fixture probabilities") {
    EmbeddingSet e = two_blobs(200, 2.0, 0.3, 42);
    GridSpec g = make_grid(-2, 2, -2, 2, 16, 16);
    ClassifierFit fit = fit_classifier_field(e, g, 1.0, 5000);
    CHECK(fit.converged);
    const double cell = g.dz1();
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            Point c = cell_center(g, i, j);
            const double* p = fit.field.cell(i, j);
            double pmax = std::max(p[0], p[1]);
            double sum = p[0] + p[1];
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            double dist_cells = std::fabs(c[0]) / cell;
            if (dist_cells < 1.0) CHECK(pmax < 0.9);
            if (dist_cells >= 5.0) CHECK(pmax > 0.99);
        }
}

TEST_CASE("classifier field: loss never increases and label permutation permutes classes") {
    EmbeddingSet e = two_blobs(80, 2.0, 0.4, 7);
    GridSpec g = make_grid(-2, 2, -2, 2, 8, 8);
    ClassifierFit fit = fit_classifier_field(e, g, 1.0, 2000);
    for (std::size_t k = 1; k < fit.loss_history.size(); ++k)
        CHECK(fit.loss_history[k] <= fit.loss_history[k - 1] + 1e-15);

    // rename so the sorted class order flips: left->z_left, right->a_right
    EmbeddingSet renamed = e;
    for (auto& lab : renamed.labels) lab = lab == "left" ? "z_left" : "a_right";
    ClassifierFit fit2 = fit_classifier_field(renamed, g, 1.0, 2000);
    REQUIRE(fit.classes == std::vector<std::string>{"left", "right"});
    REQUIRE(fit2.classes == std::vector<std::string>{"a_right", "z_left"});
    for (std::int64_t c = 0; c < g.cells(); ++c) {
        CHECK(fit.field.values[2 * c] == doctest::Approx(fit2.field.values[2 * c + 1]).epsilon(1e-9));
        CHECK(fit.field.values[2 * c + 1] == doctest::Approx(fit2.field.values[2 * c]).epsilon(1e-9));
    }
}

TEST_CASE("classifier field input validation") {
    GridSpec g = make_grid(-1, 1, -1, 1, 4, 4);
    EmbeddingSet one_class{{0, 0, 1, 1}, {"a", "a"}};
    CHECK_THROWS_AS(fit_classifier_field(one_class, g, 1.0, 100), InputError);
    EmbeddingSet unlabeled{{0, 0, 1, 1}, {}};
    CHECK_THROWS_AS(fit_classifier_field(unlabeled, g, 1.0, 100), InputError);
    EmbeddingSet ok{{0, 0, 1, 1}, {"a", "b"}};
    CHECK_THROWS_AS(fit_classifier_field(ok, g, -1.0, 100), InputError);
}

TEST_CASE("equalization report on the identity transform is a fixed point") {
    GridSpec g = make_grid(0, 1, 0, 1, 16, 16);
    MeasureField m = make_bump_density(g, {{0.5, 0.5}}, {0.2}, {2.0});
    TransformField id = identity_transform(g);
    EmbeddingSet e = two_blobs(40, 0.4, 0.05, 1);
    for (std::size_t i = 0; i < e.xy.size(); ++i) e.xy[i] = 0.5 + e.xy[i] * 0.5;
    EvalReport rep = equalization_report(m, id, e, e, 32, 0, 5);
    CHECK(rep.entropy_before == rep.entropy_after);
    CHECK(rep.density_cv_before == doctest::Approx(rep.density_cv_after).epsilon(1e-12));
    CHECK(rep.area_ratio == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(rep.f1_before.has_value());
    REQUIRE(rep.f1_after.has_value());
    CHECK(*rep.f1_before == *rep.f1_after);

    EmbeddingSet plain{e.xy, {}};
    EvalReport rep2 = equalization_report(m, id, plain, plain, 32, 0, 5);
    CHECK_FALSE(rep2.f1_before.has_value());
}

TEST_SUITE_END();
