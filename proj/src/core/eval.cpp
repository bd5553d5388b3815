#include "core/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "core/rng.hpp"

namespace latcart {

double histogram_entropy(const EmbeddingSet& e, int bins_per_axis) {
    validate_embeddings(e);
    if (e.size() == 0) throw InputError("entropy of an empty embedding set");
    if (bins_per_axis < 1) throw InputError("bins_per_axis must be >= 1");
    double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1, lo2 = lo1, hi2 = -lo1;
    for (std::int64_t i = 0; i < e.size(); ++i) {
        lo1 = std::min(lo1, e.xy[2 * i]);
        hi1 = std::max(hi1, e.xy[2 * i]);
        lo2 = std::min(lo2, e.xy[2 * i + 1]);
        hi2 = std::max(hi2, e.xy[2 * i + 1]);
    }
    // expand the max side so boundary points bin in range
    hi1 += 1e-9;
    hi2 += 1e-9;
    const int B = bins_per_axis;
    std::map<std::int64_t, std::int64_t> counts;
    for (std::int64_t i = 0; i < e.size(); ++i) {
        int b1 = std::clamp(static_cast<int>((e.xy[2 * i] - lo1) / (hi1 - lo1) * B), 0, B - 1);
        int b2 = std::clamp(static_cast<int>((e.xy[2 * i + 1] - lo2) / (hi2 - lo2) * B), 0, B - 1);
        ++counts[static_cast<std::int64_t>(b1) * B + b2];
    }
    double n = static_cast<double>(e.size());
    double ent = 0.0;
    for (const auto& [bin, c] : counts) {
        double p = static_cast<double>(c) / n;
        ent -= p * std::log(p);
    }
    return ent;
}

namespace {

struct KMeansRun {
    std::vector<int> assign;
    std::vector<double> centers;
    double inertia = 0.0;
};

double sqdist(const double* a, const double* b) {
    double dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

KMeansRun lloyd(const EmbeddingSet& e, int k, CounterRng rng) {
    const std::int64_t n = e.size();
    std::vector<double> centers(2 * k);
    // k-means++ seeding
    std::int64_t first = std::min<std::int64_t>(static_cast<std::int64_t>(rng.next_double() * n), n - 1);
    centers[0] = e.xy[2 * first];
    centers[1] = e.xy[2 * first + 1];
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int cc = 0; cc < c; ++cc)
                best = std::min(best, sqdist(&e.xy[2 * i], &centers[2 * cc]));
            d2[i] = best;
            total += best;
        }
        std::int64_t pick = 0;
        if (total > 0) {
            double target = rng.next_double() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::int64_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = std::min<std::int64_t>(static_cast<std::int64_t>(rng.next_double() * n), n - 1);
        }
        centers[2 * c] = e.xy[2 * pick];
        centers[2 * c + 1] = e.xy[2 * pick + 1];
    }

    std::vector<int> assign(n, -1);
    std::vector<double> sums(2 * k);
    std::vector<std::int64_t> counts(k);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        for (std::int64_t i = 0; i < n; ++i) {
            int best = 0;
            double bd = sqdist(&e.xy[2 * i], &centers[0]);
            for (int c = 1; c < k; ++c) {
                double d = sqdist(&e.xy[2 * i], &centers[2 * c]);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        // empty clusters take the point farthest from its center
        std::fill(counts.begin(), counts.end(), 0);
        for (std::int64_t i = 0; i < n; ++i) ++counts[assign[i]];
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            double worst = -1.0;
            std::int64_t w = 0;
            for (std::int64_t i = 0; i < n; ++i) {
                if (counts[assign[i]] <= 1) continue;
                double d = sqdist(&e.xy[2 * i], &centers[2 * assign[i]]);
                if (d > worst) {
                    worst = d;
                    w = i;
                }
            }
            --counts[assign[w]];
            assign[w] = c;
            counts[c] = 1;
            changed = true;
        }
        if (!changed && iter > 0) break;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::int64_t i = 0; i < n; ++i) {
            sums[2 * assign[i]] += e.xy[2 * i];
            sums[2 * assign[i] + 1] += e.xy[2 * i + 1];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            centers[2 * c] = sums[2 * c] / counts[c];
            centers[2 * c + 1] = sums[2 * c + 1] / counts[c];
        }
    }
    KMeansRun run;
    run.assign = std::move(assign);
    run.centers = std::move(centers);
    run.inertia = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
        run.inertia += sqdist(&e.xy[2 * i], &run.centers[2 * run.assign[i]]);
    return run;
}

} // namespace

KMeansResult kmeans_f1(const EmbeddingSet& e, int k, std::uint64_t seed, int restarts) {
    validate_embeddings(e);
    if (!e.labeled()) throw InputError("kmeans_f1 needs labeled embeddings");
    if (k < 1) throw InputError("k must be >= 1");
    if (k > e.size()) throw InputError("k exceeds the number of points");
    if (restarts < 1) throw InputError("restarts must be >= 1");

    KMeansRun best;
    for (int r = 0; r < restarts; ++r) {
        KMeansRun run = lloyd(e, k, CounterRng(seed, static_cast<std::uint64_t>(r)));
        if (r == 0 || run.inertia < best.inertia) best = std::move(run);
    }

    // majority label per cluster, ties to the lexicographically smallest
    std::vector<std::map<std::string, std::int64_t>> tallies(k);
    for (std::int64_t i = 0; i < e.size(); ++i) ++tallies[best.assign[i]][e.labels[i]];
    std::vector<std::string> cluster_label(k);
    for (int c = 0; c < k; ++c) {
        std::int64_t top = -1;
        for (const auto& [lab, cnt] : tallies[c])
            if (cnt > top) {
                top = cnt;
                cluster_label[c] = lab;
            }
    }

    std::set<std::string> classes(e.labels.begin(), e.labels.end());
    double f1_sum = 0.0;
    for (const std::string& cls : classes) {
        std::int64_t tp = 0, fp = 0, fn = 0;
        for (std::int64_t i = 0; i < e.size(); ++i) {
            bool truth = e.labels[i] == cls;
            bool pred = cluster_label[best.assign[i]] == cls;
            tp += truth && pred;
            fp += !truth && pred;
            fn += truth && !pred;
        }
        double p = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        double r = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        f1_sum += p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    }
    KMeansResult res;
    res.f1 = f1_sum / static_cast<double>(classes.size());
    res.assignments = std::move(best.assign);
    res.inertia = best.inertia;
    return res;
}

namespace {

constexpr int kn_features = 6;

inline void features_of(Point z, double* phi) {
    phi[0] = 1.0;
    phi[1] = z[0];
    phi[2] = z[1];
    phi[3] = z[0] * z[0];
    phi[4] = z[0] * z[1];
    phi[5] = z[1] * z[1];
}

// mean cross-entropy + l2/(2N) * ||W||^2 (bias unpenalized); writes the
// gradient and returns the loss.
double loss_and_grad(const std::vector<double>& phi, const std::vector<int>& y, int C,
                     double l2, const std::vector<double>& W, std::vector<double>& G,
                     std::vector<double>& prob_row) {
    const std::int64_t n = static_cast<std::int64_t>(y.size());
    std::fill(G.begin(), G.end(), 0.0);
    double loss = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double* f = &phi[i * kn_features];
        double mx = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < C; ++c) {
            double s = 0.0;
            for (int d = 0; d < kn_features; ++d) s += W[c * kn_features + d] * f[d];
            prob_row[c] = s;
            mx = std::max(mx, s);
        }
        double zsum = 0.0;
        for (int c = 0; c < C; ++c) {
            prob_row[c] = std::exp(prob_row[c] - mx);
            zsum += prob_row[c];
        }
        for (int c = 0; c < C; ++c) prob_row[c] /= zsum;
        loss -= std::log(std::max(prob_row[y[i]], 1e-300));
        for (int c = 0; c < C; ++c) {
            double coef = prob_row[c] - (c == y[i] ? 1.0 : 0.0);
            for (int d = 0; d < kn_features; ++d) G[c * kn_features + d] += coef * f[d];
        }
    }
    double inv_n = 1.0 / static_cast<double>(n);
    loss *= inv_n;
    for (double& g : G) g *= inv_n;
    for (int c = 0; c < C; ++c)
        for (int d = 1; d < kn_features; ++d) {
            loss += 0.5 * l2 * inv_n * W[c * kn_features + d] * W[c * kn_features + d];
            G[c * kn_features + d] += l2 * inv_n * W[c * kn_features + d];
        }
    return loss;
}

} // namespace

ClassifierFit fit_classifier_field(const EmbeddingSet& e, const GridSpec& spec, double l2_penalty,
                                   int max_iters) {
    validate_embeddings(e);
    validate_grid(spec);
    if (!e.labeled()) throw InputError("classifier fit needs labeled embeddings");
    if (l2_penalty < 0) throw InputError("l2_penalty must be >= 0");
    if (max_iters < 1) throw InputError("max_iters must be >= 1");
    std::set<std::string> class_set(e.labels.begin(), e.labels.end());
    if (class_set.size() < 2) throw InputError("classifier fit needs at least 2 classes");
    std::vector<std::string> classes(class_set.begin(), class_set.end());
    std::map<std::string, int> class_idx;
    for (int c = 0; c < static_cast<int>(classes.size()); ++c) class_idx[classes[c]] = c;
    const int C = static_cast<int>(classes.size());
    const std::int64_t n = e.size();

    std::vector<double> phi(n * kn_features);
    std::vector<int> y(n);
    for (std::int64_t i = 0; i < n; ++i) {
        features_of(e.point(i), &phi[i * kn_features]);
        y[i] = class_idx[e.labels[i]];
    }

    ClassifierFit fit;
    std::vector<double> W(C * kn_features, 0.0), G(C * kn_features), W2(C * kn_features),
        G2(C * kn_features), prob(C);
    double loss = loss_and_grad(phi, y, C, l2_penalty, W, G, prob);
    fit.loss_history.push_back(loss);
    double step = 1.0;
    int it = 0;
    for (; it < max_iters; ++it) {
        double gn2 = 0.0;
        for (double g : G) gn2 += g * g;
        fit.grad_norm = std::sqrt(gn2);
        if (fit.grad_norm <= 1e-6) {
            fit.converged = true;
            break;
        }
        step = std::min(step * 2.0, 1e6);
        bool accepted = false;
        while (step >= 1e-18) {
            for (std::size_t w = 0; w < W.size(); ++w) W2[w] = W[w] - step * G[w];
            double loss2 = loss_and_grad(phi, y, C, l2_penalty, W2, G2, prob);
            if (loss2 <= loss - 1e-4 * step * gn2) {
                W.swap(W2);
                G.swap(G2);
                loss = loss2;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // stuck at machine precision
        fit.loss_history.push_back(loss);
    }
    fit.iterations = it;

    MeaningField field;
    field.spec = spec;
    field.dh = C;
    field.distribution = true;
    field.values.resize(spec.cells() * C);
    double f[kn_features];
    for (int i = 0; i < spec.n1; ++i) {
        for (int j = 0; j < spec.n2; ++j) {
            features_of(cell_center(spec, i, j), f);
            double* out = field.cell(i, j);
            double mx = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < C; ++c) {
                double s = 0.0;
                for (int d = 0; d < kn_features; ++d) s += W[c * kn_features + d] * f[d];
                out[c] = s;
                mx = std::max(mx, s);
            }
            double zsum = 0.0;
            for (int c = 0; c < C; ++c) {
                out[c] = std::exp(out[c] - mx);
                zsum += out[c];
            }
            for (int c = 0; c < C; ++c) out[c] /= zsum;
        }
    }
    fit.field = std::move(field);
    fit.classes = std::move(classes);
    return fit;
}

double coefficient_of_variation(const std::vector<double>& values) {
    if (values.empty()) throw InputError("cv of an empty vector");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (mean == 0.0) throw InputError("cv undefined for zero mean");
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return std::sqrt(var) / mean;
}

void transform_stats(const MeasureField& m, const TransformField& t, double& cv_before,
                     double& cv_after, double& area_ratio) {
    if (!(m.spec == t.spec)) throw InputError("measure and transform grids differ");
    MeasureField floored = floored_density(m, 1e-8);
    cv_before = coefficient_of_variation(floored.values);
    MeasureField after = cell_density_after(m, t);
    cv_after = coefficient_of_variation(after.values);
    auto areas = quad_signed_areas(t);
    double total = 0.0;
    for (double a : areas) total += a;
    double original = static_cast<double>(areas.size()) * m.spec.dz1() * m.spec.dz2();
    area_ratio = total / original;
}

EvalReport equalization_report(const MeasureField& m, const TransformField& t,
                               const EmbeddingSet& before, const EmbeddingSet& after, int bins,
                               std::uint64_t seed, int restarts) {
    EvalReport rep;
    rep.entropy_before = histogram_entropy(before, bins);
    rep.entropy_after = histogram_entropy(after, bins);
    transform_stats(m, t, rep.density_cv_before, rep.density_cv_after, rep.area_ratio);
    if (before.labeled() && after.labeled()) {
        std::set<std::string> classes(before.labels.begin(), before.labels.end());
        int k = static_cast<int>(classes.size());
        rep.f1_before = kmeans_f1(before, k, seed, restarts).f1;
        rep.f1_after = kmeans_f1(after, k, seed, restarts).f1;
    }
    return rep;
}

} // namespace latcart
