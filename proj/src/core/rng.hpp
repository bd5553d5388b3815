#pragma once

#include <cmath>
#include <cstdint>

namespace latcart {

// Counter-based pseudo-random stream: value(i) = mix(key + i * golden).
// Stateless per counter, so identical across platforms and safe to split
// into independent substreams. Used wherever reproducible randomness is
// part of a contract (k-means seeding, fixtures, test generators).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed + 0x12E15E35B500F16EULL) ^ mix(stream + 0x2545F4914F6CDD1DULL))) {}

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++ctr_); }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double next_open_double() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // One Box-Muller pair.
    void next_gaussian_pair(double& g1, double& g2) {
        double u1 = next_open_double();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        g1 = r * std::cos(2.0 * M_PI * u2);
        g2 = r * std::sin(2.0 * M_PI * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

} // namespace latcart
