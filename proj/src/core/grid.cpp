#include "core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latcart {

void validate_grid(const GridSpec& spec) {
    if (!(spec.max1 > spec.min1) || !(spec.max2 > spec.min2))
        throw InputError("grid bounds must satisfy max > min per axis");
    if (spec.n1 < 1 || spec.n2 < 1)
        throw InputError("grid needs at least one cell per axis");
    if (!std::isfinite(spec.min1) || !std::isfinite(spec.max1) || !std::isfinite(spec.min2) ||
        !std::isfinite(spec.max2))
        throw InputError("grid bounds must be finite");
}

GridSpec make_grid(double min1, double max1, double min2, double max2, int n1, int n2) {
    GridSpec spec{min1, max1, min2, max2, n1, n2};
    validate_grid(spec);
    return spec;
}

void validate_embeddings(const EmbeddingSet& e) {
    if (e.xy.size() % 2 != 0) throw InputError("embedding coordinate array must have even length");
    for (double v : e.xy)
        if (!std::isfinite(v)) throw InputError("embedding coordinates must be finite");
    if (!e.labels.empty() && static_cast<std::int64_t>(e.labels.size()) != e.size())
        throw InputError("labels must have exactly one entry per point");
}

void validate_meaning(const MeaningField& f) {
    validate_grid(f.spec);
    if (f.dh < 1) throw InputError("meaning field needs dh >= 1");
    if (static_cast<std::int64_t>(f.values.size()) != f.spec.cells() * f.dh)
        throw InputError("meaning field value count does not match n1*n2*dh");
    for (double v : f.values)
        if (!std::isfinite(v)) throw InputError("meaning field values must be finite");
    if (f.distribution) {
        for (std::int64_t c = 0; c < f.spec.cells(); ++c) {
            const double* h = f.values.data() + c * f.dh;
            double sum = 0.0;
            for (int k = 0; k < f.dh; ++k) {
                if (h[k] < -1e-9) throw InputError("distribution field has a negative entry");
                sum += h[k];
            }
            if (std::fabs(sum - 1.0) > 1e-9)
                throw InputError("distribution field cell does not sum to 1 within 1e-9");
        }
    }
}

void validate_measure(const MeasureField& f, bool require_nonneg) {
    validate_grid(f.spec);
    if (static_cast<std::int64_t>(f.values.size()) != f.spec.cells())
        throw InputError("measure field value count does not match n1*n2");
    for (double v : f.values) {
        if (!std::isfinite(v)) throw InputError("measure field values must be finite");
        if (require_nonneg && v < 0) throw InputError("measure field values must be >= 0");
    }
}

Point cell_center(const GridSpec& spec, int i, int j) {
    if (i < 0 || i >= spec.n1 || j < 0 || j >= spec.n2)
        throw InputError("cell index out of range");
    return {spec.min1 + (i + 0.5) * spec.dz1(), spec.min2 + (j + 0.5) * spec.dz2()};
}

GridSpec build_grid(const EmbeddingSet& e, int n1, int n2, double pad_fraction) {
    validate_embeddings(e);
    if (e.size() == 0) throw InputError("cannot build a grid over an empty embedding set");
    if (pad_fraction < 0) throw InputError("pad_fraction must be >= 0");
    double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
    double lo2 = lo1, hi2 = -lo1;
    for (std::int64_t i = 0; i < e.size(); ++i) {
        lo1 = std::min(lo1, e.xy[2 * i]);
        hi1 = std::max(hi1, e.xy[2 * i]);
        lo2 = std::min(lo2, e.xy[2 * i + 1]);
        hi2 = std::max(hi2, e.xy[2 * i + 1]);
    }
    if (hi1 == lo1) { lo1 -= 0.5; hi1 += 0.5; }
    if (hi2 == lo2) { lo2 -= 0.5; hi2 += 0.5; }
    double side1 = hi1 - lo1, side2 = hi2 - lo2;
    return make_grid(lo1 - pad_fraction * side1, hi1 + pad_fraction * side1,
                     lo2 - pad_fraction * side2, hi2 + pad_fraction * side2, n1, n2);
}

void bilinear_sample(const GridSpec& spec, const double* values, int dim, Point z, double* out) {
    if (!(z[0] >= spec.min1 && z[0] <= spec.max1 && z[1] >= spec.min2 && z[1] <= spec.max2))
        throw DomainError("sample point outside grid bounds");
    double u = (z[0] - spec.min1) / spec.dz1() - 0.5;
    double v = (z[1] - spec.min2) / spec.dz2() - 0.5;
    u = std::clamp(u, 0.0, static_cast<double>(spec.n1 - 1));
    v = std::clamp(v, 0.0, static_cast<double>(spec.n2 - 1));
    int i0 = std::min(static_cast<int>(u), std::max(spec.n1 - 2, 0));
    int j0 = std::min(static_cast<int>(v), std::max(spec.n2 - 2, 0));
    double fu = u - i0, fv = v - j0;
    int i1 = std::min(i0 + 1, spec.n1 - 1);
    int j1 = std::min(j0 + 1, spec.n2 - 1);
    const std::int64_t n2 = spec.n2;
    const double* p00 = values + (static_cast<std::int64_t>(i0) * n2 + j0) * dim;
    const double* p10 = values + (static_cast<std::int64_t>(i1) * n2 + j0) * dim;
    const double* p01 = values + (static_cast<std::int64_t>(i0) * n2 + j1) * dim;
    const double* p11 = values + (static_cast<std::int64_t>(i1) * n2 + j1) * dim;
    double w00 = (1 - fu) * (1 - fv), w10 = fu * (1 - fv), w01 = (1 - fu) * fv, w11 = fu * fv;
    for (int k = 0; k < dim; ++k)
        out[k] = w00 * p00[k] + w10 * p10[k] + w01 * p01[k] + w11 * p11[k];
}

double bilinear_sample_scalar(const MeasureField& f, Point z) {
    double out;
    bilinear_sample(f.spec, f.values.data(), 1, z, &out);
    return out;
}

std::vector<double> bilinear_sample_vector(const MeaningField& f, Point z) {
    std::vector<double> out(f.dh);
    bilinear_sample(f.spec, f.values.data(), f.dh, z, out.data());
    return out;
}

std::array<int, 2> cell_of(const GridSpec& spec, Point z) {
    if (!(z[0] >= spec.min1 && z[0] <= spec.max1 && z[1] >= spec.min2 && z[1] <= spec.max2))
        throw DomainError("point outside grid bounds");
    int i = std::min(static_cast<int>((z[0] - spec.min1) / spec.dz1()), spec.n1 - 1);
    int j = std::min(static_cast<int>((z[1] - spec.min2) / spec.dz2()), spec.n2 - 1);
    return {i, j};
}

namespace {

// Nearest filled cell by center distance, expanding square rings so the
// scan can stop once no closer candidate is possible. Ties break to the
// smaller (i, j) lexicographically.
std::array<int, 2> nearest_filled(const GridSpec& spec, const std::vector<std::uint8_t>& has,
                                  int ci, int cj) {
    double dz1 = spec.dz1(), dz2 = spec.dz2();
    double best = std::numeric_limits<double>::infinity();
    std::array<int, 2> best_idx{-1, -1};
    double min_dz = std::min(dz1, dz2);
    int max_r = std::max(spec.n1, spec.n2);
    for (int r = 0; r <= max_r; ++r) {
        if (best_idx[0] >= 0 && best < r * min_dz) break;
        int ilo = ci - r, ihi = ci + r, jlo = cj - r, jhi = cj + r;
        auto consider = [&](int i, int j) {
            if (i < 0 || i >= spec.n1 || j < 0 || j >= spec.n2) return;
            if (!has[static_cast<std::int64_t>(i) * spec.n2 + j]) return;
            double di = (i - ci) * dz1, dj = (j - cj) * dz2;
            double d = std::sqrt(di * di + dj * dj);
            if (d < best || (d == best && (i < best_idx[0] || (i == best_idx[0] && j < best_idx[1])))) {
                best = d;
                best_idx = {i, j};
            }
        };
        if (r == 0) {
            consider(ci, cj);
            continue;
        }
        for (int j = jlo; j <= jhi; ++j) { consider(ilo, j); consider(ihi, j); }
        for (int i = ilo + 1; i < ihi; ++i) { consider(i, jlo); consider(i, jhi); }
    }
    return best_idx;
}

} // namespace

AggregateResult aggregate_samples_to_grid(const std::vector<Sample>& samples, const GridSpec& spec) {
    validate_grid(spec);
    if (samples.empty()) throw InputError("no samples to aggregate");
    const int dh = static_cast<int>(samples.front().h.size());
    if (dh < 1) throw InputError("samples must carry non-empty meaning vectors");
    MeaningField field;
    field.spec = spec;
    field.dh = dh;
    field.values.assign(spec.cells() * dh, 0.0);
    std::vector<std::int64_t> counts(spec.cells(), 0);
    for (const Sample& s : samples) {
        if (static_cast<int>(s.h.size()) != dh)
            throw InputError("samples have mixed meaning dimensions");
        auto [i, j] = cell_of(spec, s.z);
        std::int64_t c = static_cast<std::int64_t>(i) * spec.n2 + j;
        ++counts[c];
        double* acc = field.values.data() + c * dh;
        for (int k = 0; k < dh; ++k) acc[k] += s.h[k];
    }
    std::vector<std::uint8_t> has(spec.cells(), 0);
    for (std::int64_t c = 0; c < spec.cells(); ++c) {
        if (counts[c] > 0) {
            has[c] = 1;
            double* acc = field.values.data() + c * dh;
            for (int k = 0; k < dh; ++k) acc[k] /= static_cast<double>(counts[c]);
        }
    }
    AggregateResult res;
    res.imputed.assign(spec.cells(), 0);
    for (int i = 0; i < spec.n1; ++i) {
        for (int j = 0; j < spec.n2; ++j) {
            std::int64_t c = static_cast<std::int64_t>(i) * spec.n2 + j;
            if (has[c]) continue;
            auto src = nearest_filled(spec, has, i, j);
            std::int64_t s = static_cast<std::int64_t>(src[0]) * spec.n2 + src[1];
            std::copy_n(field.values.data() + s * dh, dh, field.values.data() + c * dh);
            res.imputed[c] = 1;
        }
    }
    res.field = std::move(field);
    return res;
}

} // namespace latcart
