#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "funcmark/linalg.hpp"

namespace funcmark {

// mt19937_64 with hand-rolled distributions so that streams are identical
// across standard libraries (std distributions are implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    uint64_t uniform_index(uint64_t n) {
        // Rejection sampling keeps the draw unbiased.
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    Vec3 uniform_in_cube(double half_extent = 1.0) {
        // Component order is fixed; do not reorder.
        double x = uniform(-half_extent, half_extent);
        double y = uniform(-half_extent, half_extent);
        double z = uniform(-half_extent, half_extent);
        return {x, y, z};
    }

    Vec3 uniform_direction() {
        double z = uniform(-1.0, 1.0);
        double a = uniform(0.0, 2.0 * M_PI);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(a), r * std::sin(a), z};
    }

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace funcmark
