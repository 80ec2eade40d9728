#ifndef SAEGT_RNG_HPP_
#define SAEGT_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "saegt/geom2d.hpp"

namespace saegt {

/// Seeded random source for episodes. Gaussian draws use Box-Muller on top
/// of mt19937_64 so sequences depend only on the seed, not on the standard
/// library's distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() { return gaussian(0.0, 1.0); }

    double gaussian(double mean, double sd) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + sd * spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return mean + sd * r * std::cos(theta);
    }

    /// Uniform over the disk via rejection from the bounding square.
    Vec2 in_disk(const Vec2& center, double radius) {
        for (;;) {
            const Vec2 p{uniform(-radius, radius), uniform(-radius, radius)};
            if (p.squared_norm() <= radius * radius) return center + p;
        }
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace saegt

#endif  // SAEGT_RNG_HPP_
