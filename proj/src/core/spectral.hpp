#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

namespace latcart {

// Density, its gradient, and the largest |grad rho| / rho over the padded
// grid, all at one diffusion time.
struct HeatSnapshot {
    std::vector<double> rho, gx, gy;
    double max_speed = 0.0;
};

// Closed-form solution of d(rho)/dt = laplacian(rho) on an L x L padded
// grid with insulating (zero-flux) walls, expanded in the even-reflection
// cosine basis. One DCT-II up front; any time t is then a coefficient
// decay followed by one DCT-III synthesis. Gradients come from centered
// differences on the synthesized grid (mirrored at the walls, consistent
// with the even reflection).
class HeatSolution {
public:
    // density: L x L row-major initial field; dz1/dz2 the physical cell
    // widths; rho_floor the positive clamp used inside max_speed.
    HeatSolution(std::vector<double> density, int L, double dz1, double dz2, double rho_floor);
    ~HeatSolution();

    HeatSolution(const HeatSolution&) = delete;
    HeatSolution& operator=(const HeatSolution&) = delete;

    // Memoized per solve; at most `cache_capacity` snapshots stay cached,
    // evicted least-recently-used. The returned pointer stays valid while
    // held even after eviction.
    std::shared_ptr<const HeatSnapshot> at_time(double t);

    // Smallest nonzero decay rate (slowest non-constant mode).
    double lambda_min() const { return lambda_min_; }

    int size() const { return L_; }

private:
    void synthesize(double t, HeatSnapshot& snap);

    int L_;
    double dz1_, dz2_, rho_floor_;
    double lambda_min_;
    std::vector<double> lam1_, lam2_;
    double* coeff_ = nullptr; // DCT-II coefficients, synthesis-normalized
    double* work_ = nullptr;
    double* out_ = nullptr;
    void* synth_plan_ = nullptr;
    static constexpr std::size_t cache_capacity = 4;
    std::map<double, std::pair<std::uint64_t, std::shared_ptr<HeatSnapshot>>> cache_;
    std::uint64_t tick_ = 0;
};

} // namespace latcart
