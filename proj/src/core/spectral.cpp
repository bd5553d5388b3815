#include "core/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

#include "core/errors.hpp"
#include "core/threading.hpp"

namespace latcart {

namespace {
// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

HeatSolution::HeatSolution(std::vector<double> density, int L, double dz1, double dz2,
                           double rho_floor)
    : L_(L), dz1_(dz1), dz2_(dz2), rho_floor_(rho_floor) {
    if (L < 2) throw InputError("padded grid must have at least 2 cells per axis");
    if (static_cast<std::int64_t>(density.size()) != static_cast<std::int64_t>(L) * L)
        throw InputError("padded density size mismatch");
    const std::int64_t n = static_cast<std::int64_t>(L) * L;
    coeff_ = fftw_alloc_real(n);
    work_ = fftw_alloc_real(n);
    out_ = fftw_alloc_real(n);
    std::copy(density.begin(), density.end(), work_);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        // ESTIMATE keeps plan selection deterministic run to run.
        fftw_plan fwd = fftw_plan_r2r_2d(L, L, work_, coeff_, FFTW_REDFT10, FFTW_REDFT10,
                                         FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
        fftw_execute(fwd);
        fftw_destroy_plan(fwd);
        synth_plan_ = fftw_plan_r2r_2d(L, L, work_, out_, FFTW_REDFT01, FFTW_REDFT01,
                                       FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
    }
    // REDFT01(REDFT10(x)) == 4*L^2 * x in 2-D.
    const double norm = 1.0 / (4.0 * static_cast<double>(L) * L);
    for (std::int64_t i = 0; i < n; ++i) coeff_[i] *= norm;

    lam1_.resize(L);
    lam2_.resize(L);
    const double w1 = L * dz1_, w2 = L * dz2_;
    for (int k = 0; k < L; ++k) {
        lam1_[k] = (M_PI * k / w1) * (M_PI * k / w1);
        lam2_[k] = (M_PI * k / w2) * (M_PI * k / w2);
    }
    lambda_min_ = std::min(lam1_[1], lam2_[1]);
}

HeatSolution::~HeatSolution() {
    if (synth_plan_) fftw_destroy_plan(static_cast<fftw_plan>(synth_plan_));
    fftw_free(coeff_);
    fftw_free(work_);
    fftw_free(out_);
}

void HeatSolution::synthesize(double t, HeatSnapshot& snap) {
    const int L = L_;
    const std::int64_t n = static_cast<std::int64_t>(L) * L;
    std::vector<double> e1(L), e2(L);
    for (int k = 0; k < L; ++k) {
        e1[k] = std::exp(-lam1_[k] * t);
        e2[k] = std::exp(-lam2_[k] * t);
    }
    parallel_for(
        L,
        [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t i = b; i < e; ++i)
                for (int j = 0; j < L; ++j) work_[i * L + j] = coeff_[i * L + j] * e1[i] * e2[j];
        },
        8);
    fftw_execute(static_cast<fftw_plan>(synth_plan_));
    snap.rho.assign(out_, out_ + n);
    snap.gx.resize(n);
    snap.gy.resize(n);
    const std::vector<double>& rho = snap.rho;
    std::vector<double>& gx = snap.gx;
    std::vector<double>& gy = snap.gy;
    const double inv2dz1 = 1.0 / (2.0 * dz1_), inv2dz2 = 1.0 / (2.0 * dz2_);
    std::vector<double> speed_max(max_threads(), 0.0);
    std::atomic<int> widx{0};
    parallel_for(
        L,
        [&](std::int64_t b, std::int64_t e) {
            int me = widx.fetch_add(1);
            double local = 0.0;
            for (std::int64_t i = b; i < e; ++i) {
                const std::int64_t up = (i > 0 ? i - 1 : 0) * L;
                const std::int64_t dn = (i < L - 1 ? i + 1 : L - 1) * L;
                const std::int64_t row = i * L;
                for (int j = 0; j < L; ++j) {
                    double dx = (rho[dn + j] - rho[up + j]) * inv2dz1;
                    int jl = j > 0 ? j - 1 : 0, jr = j < L - 1 ? j + 1 : L - 1;
                    double dy = (rho[row + jr] - rho[row + jl]) * inv2dz2;
                    gx[row + j] = dx;
                    gy[row + j] = dy;
                    double r = std::max(rho[row + j], rho_floor_);
                    double s = std::sqrt(dx * dx + dy * dy) / r;
                    local = std::max(local, s);
                }
            }
            speed_max[me] = std::max(speed_max[me], local);
        },
        8);
    snap.max_speed = *std::max_element(speed_max.begin(), speed_max.end());
}

std::shared_ptr<const HeatSnapshot> HeatSolution::at_time(double t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) {
        it->second.first = ++tick_;
        return it->second.second;
    }
    auto snap = std::make_shared<HeatSnapshot>();
    synthesize(t, *snap);
    cache_[t] = {++tick_, snap};
    if (cache_.size() > cache_capacity) {
        auto victim = cache_.begin();
        for (auto c = cache_.begin(); c != cache_.end(); ++c)
            if (c->second.first < victim->second.first) victim = c;
        cache_.erase(victim);
    }
    return snap;
}

} // namespace latcart
