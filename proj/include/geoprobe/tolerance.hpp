#pragma once

#include <algorithm>
#include <cmath>

namespace geoprobe {

/// Normalization rule and thresholds behind every pass/fail decision.
struct TolerancePolicy {
    double threshold = 1e-9;

    /// |lhs - rhs| / max(1, |lhs|, |rhs|).
    static double relative(double lhs, double rhs) {
        return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
    }

    /// Squared-length identities are normalized by the scene's sum of squared side lengths.
    static double squared_length(double lhs, double rhs, double sum_sq_sides) {
        return std::abs(lhs - rhs) / sum_sq_sides;
    }

    bool passes(double residual) const { return residual < threshold; }
};

/// Parallel / tangent classification: |cross| or discriminant below this times scale^2.
inline constexpr double kParallelEps = 1e-12;

/// A point counts as on a circle when | |p - c| - r | <= kOnCurveEps * r.
inline constexpr double kOnCurveEps = 1e-9;

}  // namespace geoprobe
