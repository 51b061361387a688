#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "vec.hpp"

namespace geoprobe {

/// Per-trial random stream. The state is a pure function of (seed, index, stream), so
/// trials can run in any order or on any thread and still draw identical numbers.
/// Floating-point draws are built from raw engine bits rather than <random> distributions,
/// whose output is implementation-defined.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t index, std::uint32_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream,
                          0x9e3779b9u};
        engine_.seed(seq);
    }

    std::uint64_t bits() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    double angle() { return uniform(0.0, 2.0 * std::numbers::pi); }

    Vec2 unit2() {
        const double t = angle();
        return {std::cos(t), std::sin(t)};
    }

    /// Uniform direction on the unit sphere.
    Vec3 unit3() {
        const double z = uniform(-1.0, 1.0);
        const double t = angle();
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(t), r * std::sin(t), z};
    }

    Vec2 in_box(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }

    Vec3 in_box3(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

private:
    std::mt19937_64 engine_;
};

}  // namespace geoprobe
