#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace refracto::rng {

/// Seeded random source with pinned output sequences.
///
/// The engine is std::mt19937_64 (its outputs are fixed by the C++
/// standard). The distributions are implemented here instead of using
/// std::*_distribution, whose algorithms vary between standard library
/// implementations; this keeps seeded results stable for a given draw
/// order regardless of toolchain.
class Generator {
public:
    explicit Generator(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller (two uniforms per draw, no caching).
    double normal(double mean, double sd) {
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, n). Rejection keeps it unbiased.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Poisson count by Knuth's product method (fine for the small rates used here).
    int poisson(double lambda) {
        const double limit = std::exp(-lambda);
        int k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace refracto::rng
