#include "core/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/threading.hpp"

namespace latcart {

namespace {

// d/dz of one component along one axis at index i of n, stencil width dz.
// lo/hi are the neighboring component values already picked by the caller.
inline double diff1(double lo, double hi, double dz, bool one_sided) {
    return (hi - lo) / (one_sided ? dz : 2.0 * dz);
}

} // namespace

JacobianAtCell finite_diff_jacobian(const MeaningField& H, int i, int j) {
    validate_grid(H.spec);
    if (i < 0 || i >= H.spec.n1 || j < 0 || j >= H.spec.n2)
        throw InputError("cell index out of range");
    if (H.spec.n1 < 2 || H.spec.n2 < 2)
        throw InputError("jacobian needs at least 2 cells per axis");
    JacobianAtCell out;
    out.i = i;
    out.j = j;
    out.jac.resize(2 * static_cast<std::size_t>(H.dh));
    const double dz1 = H.spec.dz1(), dz2 = H.spec.dz2();
    const int i_lo = std::max(i - 1, 0), i_hi = std::min(i + 1, H.spec.n1 - 1);
    const int j_lo = std::max(j - 1, 0), j_hi = std::min(j + 1, H.spec.n2 - 1);
    const bool one1 = (i_hi - i_lo) == 1, one2 = (j_hi - j_lo) == 1;
    const double* a1 = H.cell(i_lo, j);
    const double* b1 = H.cell(i_hi, j);
    const double* a2 = H.cell(i, j_lo);
    const double* b2 = H.cell(i, j_hi);
    for (int k = 0; k < H.dh; ++k) {
        out.jac[2 * k] = diff1(a1[k], b1[k], dz1, one1);
        out.jac[2 * k + 1] = diff1(a2[k], b2[k], dz2, one2);
    }
    double m00 = 0.0, m01 = 0.0, m11 = 0.0;
    for (int k = 0; k < H.dh; ++k) {
        m00 += out.jac[2 * k] * out.jac[2 * k];
        m01 += out.jac[2 * k] * out.jac[2 * k + 1];
        m11 += out.jac[2 * k + 1] * out.jac[2 * k + 1];
    }
    out.metric = {m00, m01, m01, m11};
    return out;
}

MeasureField riemannian_measure(const MeaningField& H) {
    validate_meaning(H);
    if (H.spec.n1 < 2 || H.spec.n2 < 2)
        throw InputError("riemannian measure needs at least 2 cells per axis");
    MeasureField m;
    m.spec = H.spec;
    m.values.resize(H.spec.cells());
    const int n1 = H.spec.n1, n2 = H.spec.n2, dh = H.dh;
    const double dz1 = H.spec.dz1(), dz2 = H.spec.dz2();
    parallel_for(H.spec.cells(), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t c = b; c < e; ++c) {
            int i = static_cast<int>(c / n2), j = static_cast<int>(c % n2);
            int i_lo = std::max(i - 1, 0), i_hi = std::min(i + 1, n1 - 1);
            int j_lo = std::max(j - 1, 0), j_hi = std::min(j + 1, n2 - 1);
            double d1 = (i_hi - i_lo) == 1 ? dz1 : 2.0 * dz1;
            double d2 = (j_hi - j_lo) == 1 ? dz2 : 2.0 * dz2;
            const double* a1 = H.cell(i_lo, j);
            const double* b1 = H.cell(i_hi, j);
            const double* a2 = H.cell(i, j_lo);
            const double* b2 = H.cell(i, j_hi);
            double m00 = 0.0, m01 = 0.0, m11 = 0.0;
            for (int k = 0; k < dh; ++k) {
                double j1 = (b1[k] - a1[k]) / d1;
                double j2 = (b2[k] - a2[k]) / d2;
                m00 += j1 * j1;
                m01 += j1 * j2;
                m11 += j2 * j2;
            }
            double det = m00 * m11 - m01 * m01;
            m.values[c] = det > 0 ? std::sqrt(det) : 0.0;
        }
    });
    return m;
}

double jsd_distance(const double* p, const double* q, int d) {
    double sp = 0.0, sq = 0.0;
    for (int k = 0; k < d; ++k) {
        if (p[k] < -1e-9 || q[k] < -1e-9)
            throw InputError("jsd inputs must be entrywise non-negative");
        sp += std::max(p[k], 0.0);
        sq += std::max(q[k], 0.0);
    }
    if (std::fabs(sp - 1.0) > 1e-9 || std::fabs(sq - 1.0) > 1e-9)
        throw InputError("jsd inputs must each sum to 1 within 1e-9");
    double acc = 0.0;
    for (int k = 0; k < d; ++k) {
        double a = std::max(p[k], 0.0) / sp;
        double b = std::max(q[k], 0.0) / sq;
        double mid = 0.5 * (a + b);
        if (a > 0) acc += 0.5 * a * std::log(a / mid);
        if (b > 0) acc += 0.5 * b * std::log(b / mid);
    }
    return acc > 0 ? std::sqrt(acc) : 0.0;
}

double jsd_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw InputError("jsd inputs must have equal length");
    if (p.empty()) throw InputError("jsd inputs must be non-empty");
    return jsd_distance(p.data(), q.data(), static_cast<int>(p.size()));
}

namespace {

double euclidean_dist(const double* a, const double* b, int d) {
    double acc = 0.0;
    for (int k = 0; k < d; ++k) {
        double t = a[k] - b[k];
        acc += t * t;
    }
    return std::sqrt(acc);
}

// Zero vectors: identical pairs count as 0, a zero against a non-zero as 1.
double cosine_dist(const double* a, const double* b, int d) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int k = 0; k < d; ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    if (na == 0.0 || nb == 0.0) return (na == 0.0 && nb == 0.0) ? 0.0 : 1.0;
    return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace

MeasureField heuristic_measure(const MeaningField& H, DissimilarityKind d) {
    validate_meaning(H);
    if (d == DissimilarityKind::jsd && !H.distribution)
        throw InputError("jsd dissimilarity requires a distribution meaning field");
    MeasureField m;
    m.spec = H.spec;
    m.values.resize(H.spec.cells());
    const int n1 = H.spec.n1, n2 = H.spec.n2, dh = H.dh;
    parallel_for(H.spec.cells(), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t c = b; c < e; ++c) {
            int i = static_cast<int>(c / n2), j = static_cast<int>(c % n2);
            const double* h = H.cell(i, j);
            double acc = 0.0;
            int nn = 0;
            const int di[4] = {-1, 1, 0, 0};
            const int dj[4] = {0, 0, -1, 1};
            for (int t = 0; t < 4; ++t) {
                int ni = i + di[t], nj = j + dj[t];
                if (ni < 0 || ni >= n1 || nj < 0 || nj >= n2) continue;
                const double* g = H.cell(ni, nj);
                switch (d) {
                    case DissimilarityKind::jsd: acc += jsd_distance(h, g, dh); break;
                    case DissimilarityKind::euclidean: acc += euclidean_dist(h, g, dh); break;
                    case DissimilarityKind::cosine: acc += cosine_dist(h, g, dh); break;
                }
                ++nn;
            }
            m.values[c] = nn > 0 ? acc / nn : 0.0;
        }
    });
    return m;
}

MeasureField classifier_measure(const MeaningField& P) {
    if (!P.distribution) throw InputError("classifier measure requires a distribution field");
    return heuristic_measure(P, DissimilarityKind::jsd);
}

MeasureField gaussian_blur(const MeasureField& m, double sigma_cells) {
    validate_measure(m, false);
    if (sigma_cells < 0) throw InputError("blur sigma must be >= 0");
    int radius = static_cast<int>(4.0 * sigma_cells);
    if (sigma_cells == 0.0 || radius == 0) return m;
    std::vector<double> w(radius + 1);
    for (int k = 0; k <= radius; ++k) w[k] = std::exp(-0.5 * k * k / (sigma_cells * sigma_cells));
    const int n1 = m.spec.n1, n2 = m.spec.n2;
    auto pass = [&](const std::vector<double>& in, std::vector<double>& out, bool axis1) {
        int n = axis1 ? n1 : n2;
        for (int i = 0; i < n1; ++i) {
            for (int j = 0; j < n2; ++j) {
                int p = axis1 ? i : j;
                double acc = 0.0, norm = 0.0;
                int lo = std::max(-radius, -p), hi = std::min(radius, n - 1 - p);
                for (int k = lo; k <= hi; ++k) {
                    double wk = w[std::abs(k)];
                    std::int64_t idx = axis1 ? static_cast<std::int64_t>(i + k) * n2 + j
                                             : static_cast<std::int64_t>(i) * n2 + (j + k);
                    acc += wk * in[idx];
                    norm += wk;
                }
                out[static_cast<std::int64_t>(i) * n2 + j] = acc / norm;
            }
        }
    };
    MeasureField out;
    out.spec = m.spec;
    out.values.resize(m.spec.cells());
    std::vector<double> tmp(m.spec.cells());
    pass(m.values, tmp, true);
    pass(tmp, out.values, false);
    return out;
}

MeasureField relax_to_mean(const MeasureField& m, const EmbeddingSet& e, double sigma_relax) {
    validate_measure(m, false);
    validate_embeddings(e);
    if (!(sigma_relax > 0)) throw InputError("relaxation sigma must be > 0");
    if (e.size() == 0) throw InputError("relaxation needs a non-empty embedding set");
    double mean = 0.0;
    for (double v : m.values) mean += v;
    mean /= static_cast<double>(m.values.size());
    MeasureField out;
    out.spec = m.spec;
    out.values.resize(m.spec.cells());
    const int n2 = m.spec.n2;
    const std::int64_t np = e.size();
    parallel_for(m.spec.cells(), [&](std::int64_t b, std::int64_t en) {
        for (std::int64_t c = b; c < en; ++c) {
            Point z = cell_center(m.spec, static_cast<int>(c / n2), static_cast<int>(c % n2));
            double best = std::numeric_limits<double>::infinity();
            for (std::int64_t p = 0; p < np; ++p) {
                double dx = z[0] - e.xy[2 * p], dy = z[1] - e.xy[2 * p + 1];
                best = std::min(best, dx * dx + dy * dy);
            }
            double w = std::exp(-0.5 * best / (sigma_relax * sigma_relax));
            out.values[c] = w * m.values[c] + (1.0 - w) * mean;
        }
    });
    return out;
}

} // namespace latcart
