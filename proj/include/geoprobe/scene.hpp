#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "constructions.hpp"
#include "error.hpp"
#include "primitives.hpp"
#include "rng.hpp"

namespace geoprobe {

enum class SceneKind : std::uint32_t {
    Triangle = 1,
    AcuteTriangle,
    Polygon,
    PointsOnCircle,
    CirclePair,
    SpherePair,
    Cycle3d,
    PointCloud3d,
};

constexpr std::string_view to_string(SceneKind k) {
    switch (k) {
        case SceneKind::Triangle: return "triangle";
        case SceneKind::AcuteTriangle: return "acute-triangle";
        case SceneKind::Polygon: return "polygon";
        case SceneKind::PointsOnCircle: return "points-on-circle";
        case SceneKind::CirclePair: return "circle-pair";
        case SceneKind::SpherePair: return "sphere-pair";
        case SceneKind::Cycle3d: return "cycle-3d";
        case SceneKind::PointCloud3d: return "point-cloud-3d";
    }
    return "unknown";
}

struct SceneParams {
    std::size_t n = 3;  // vertex / point count where applicable
};

/// A generated configuration plus the (seed, index) that produced it.
struct Scene {
    SceneKind kind = SceneKind::Triangle;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    std::vector<Vec2> points;   // triangle / polygon vertices, or points on a circle
    std::vector<Vec2> probes;   // probe points (first one interior where that applies)
    std::vector<Vec3> points3;  // 3D cycle / cloud
    std::vector<Vec3> probes3;
    std::vector<Circle> circles;
    std::vector<Sphere> spheres;

    geoprobe::Triangle triangle() const { return {points.at(0), points.at(1), points.at(2)}; }
    geoprobe::Polygon polygon() const { return geoprobe::Polygon(points); }
};

inline constexpr int kMaxSceneAttempts = 10000;
inline constexpr double kMinAngleDeg = 5.0;
inline constexpr double kMaxAcuteAngleDeg = 85.0;
inline constexpr double kProbeBoundaryFraction = 1e-3;

namespace detail {

constexpr double deg(double d) { return d * std::numbers::pi / 180.0; }

inline bool triangle_guard(const std::vector<Vec2>& v, bool acute) {
    const double area = signed_area(v[0], v[1], v[2]);
    if (area == 0.0) return false;
    const Triangle t(v[0], v[1], v[2]);
    const double d = t.diameter();
    if (d < 0.5 || d > 10.0) return false;
    for (double a : t.angles()) {
        if (a < deg(kMinAngleDeg)) return false;
        if (acute && a > deg(kMaxAcuteAngleDeg)) return false;
    }
    return true;
}

inline Vec2 interior_probe_triangle(const Triangle& t, TrialRng& rng) {
    const double margin = kProbeBoundaryFraction * t.diameter();
    const Polygon poly({t.a(), t.b(), t.c()});
    for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
        double u = rng.uniform(), v = rng.uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        const Vec2 p = t.from_barycentric(1.0 - u - v, u, v);
        if (poly.boundary_distance(p) >= margin) return p;
    }
    fail(ErrorCode::GenerationExhausted, "no interior probe point found");
}

inline Vec2 interior_probe_polygon(const Polygon& poly, TrialRng& rng) {
    Vec2 lo = poly[0], hi = poly[0];
    for (const auto& p : poly.vertices()) {
        lo = {std::min(lo.x(), p.x()), std::min(lo.y(), p.y())};
        hi = {std::max(hi.x(), p.x()), std::max(hi.y(), p.y())};
    }
    const double margin = kProbeBoundaryFraction * poly.diameter();
    for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
        const Vec2 p{rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y())};
        if (poly.contains(p) && poly.boundary_distance(p) >= margin) return p;
    }
    fail(ErrorCode::GenerationExhausted, "no interior probe point found");
}

/// Minimum half-chord of a generated circle/sphere pair, relative to the smaller radius.
inline constexpr double kMinHalfChordFraction = 0.05;

inline bool pair_guard(double r1, double r2, double d) {
    if (d < 0.3 * (r1 + r2) || d > 0.95 * (r1 + r2)) return false;
    if (d <= std::abs(r1 - r2)) return false;
    const double along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    const double h_sq = r1 * r1 - along * along;
    const double hmin = kMinHalfChordFraction * std::min(r1, r2);
    return h_sq > hmin * hmin;
}

}  // namespace detail

/// Deterministic scene generation: a pure function of (kind, params, seed, index).
inline Scene sample_scene(SceneKind kind, const SceneParams& params, std::uint64_t seed, std::uint64_t index) {
    Scene s;
    s.kind = kind;
    s.seed = seed;
    s.index = index;
    TrialRng rng(seed, index, static_cast<std::uint32_t>(kind));

    switch (kind) {
        case SceneKind::Triangle:
        case SceneKind::AcuteTriangle: {
            const bool acute = kind == SceneKind::AcuteTriangle;
            for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
                std::vector<Vec2> v{rng.in_box(-5.0, 5.0), rng.in_box(-5.0, 5.0), rng.in_box(-5.0, 5.0)};
                if (!detail::triangle_guard(v, acute)) continue;
                const Triangle t(v[0], v[1], v[2]);
                s.points = {t.a(), t.b(), t.c()};
                s.probes = {detail::interior_probe_triangle(t, rng)};
                return s;
            }
            break;
        }
        case SceneKind::Polygon: {
            require(params.n >= 3 && params.n <= 64, ErrorCode::InvalidInput, "polygon n must lie in [3, 64]");
            const double n = static_cast<double>(params.n);
            const double sector = 2.0 * std::numbers::pi / n;
            for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
                const Vec2 center = rng.in_box(-2.0, 2.0);
                const double radius = rng.uniform(0.5, 4.0);
                const double phase = rng.angle();
                std::vector<Vec2> v;
                v.reserve(params.n);
                for (std::size_t i = 0; i < params.n; ++i) {
                    const double a = phase + (static_cast<double>(i) + rng.uniform(-0.3, 0.3)) * sector;
                    const double r = radius * (1.0 + rng.uniform(-0.4, 0.4));
                    v.push_back(center + Vec2{r * std::cos(a), r * std::sin(a)});
                }
                const Polygon poly(v);
                if (!poly.simple()) continue;
                s.points = poly.vertices();
                const Vec2 inside = detail::interior_probe_polygon(poly, rng);
                const Vec2 anywhere = center + rng.in_box(-2.0 * radius, 2.0 * radius);
                s.probes = {inside, anywhere};
                return s;
            }
            break;
        }
        case SceneKind::PointsOnCircle: {
            require(params.n >= 1, ErrorCode::InvalidInput, "need at least one point");
            for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
                const Circle c(rng.in_box(-3.0, 3.0), rng.uniform(0.5, 5.0));
                std::vector<Vec2> v;
                for (std::size_t i = 0; i < params.n; ++i) {
                    const double a = rng.angle();
                    v.push_back(c.center + c.radius * Vec2{std::cos(a), std::sin(a)});
                }
                bool distinct = true;
                for (std::size_t i = 0; i < v.size() && distinct; ++i)
                    for (std::size_t j = i + 1; j < v.size() && distinct; ++j)
                        distinct = dist(v[i], v[j]) > 1e-9 * c.radius;
                if (!distinct) continue;
                s.points = std::move(v);
                s.circles = {c};
                return s;
            }
            break;
        }
        case SceneKind::CirclePair: {
            for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
                const double r1 = rng.uniform(0.5, 3.0), r2 = rng.uniform(0.5, 3.0);
                const double d = rng.uniform(0.3, 0.95) * (r1 + r2);
                if (!detail::pair_guard(r1, r2, d)) continue;
                const Vec2 c1 = rng.in_box(-2.0, 2.0);
                s.circles = {Circle(c1, r1), Circle(c1 + d * rng.unit2(), r2)};
                return s;
            }
            break;
        }
        case SceneKind::SpherePair: {
            for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
                const double r1 = rng.uniform(0.5, 3.0), r2 = rng.uniform(0.5, 3.0);
                const double d = rng.uniform(0.3, 0.95) * (r1 + r2);
                if (!detail::pair_guard(r1, r2, d)) continue;
                const Vec3 c1 = rng.in_box3(-2.0, 2.0);
                s.spheres = {Sphere(c1, r1), Sphere(c1 + d * rng.unit3(), r2)};
                return s;
            }
            break;
        }
        case SceneKind::Cycle3d: {
            require(params.n >= 3, ErrorCode::InvalidInput, "cycle needs at least 3 points");
            for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
                std::vector<Vec3> v;
                for (std::size_t i = 0; i < params.n; ++i) v.push_back(rng.in_box3(-3.0, 3.0));
                bool ok = true;
                for (std::size_t i = 0; i < v.size() && ok; ++i) ok = dist(v[i], v[(i + 1) % v.size()]) > 0.05;
                if (ok && v.size() >= 4) {
                    // reject (near-)planar cycles
                    const Vec3 n = cross(v[1] - v[0], v[2] - v[0]);
                    double off = 0.0;
                    for (std::size_t i = 3; i < v.size(); ++i) off = std::max(off, std::abs(dot(v[i] - v[0], n)));
                    ok = norm(n) > 0.0 && off / norm(n) > 0.05;
                }
                if (!ok) continue;
                s.points3 = std::move(v);
                s.probes3 = {rng.in_box3(-4.0, 4.0)};
                return s;
            }
            break;
        }
        case SceneKind::PointCloud3d: {
            require(params.n >= 4, ErrorCode::InvalidInput, "point cloud needs at least 4 points");
            for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
                std::vector<Vec3> v;
                for (std::size_t i = 0; i < params.n; ++i) v.push_back(rng.in_box3(-2.0, 2.0));
                const double vol = std::abs(dot(cross(v[1] - v[0], v[2] - v[0]), v[3] - v[0]));
                if (vol < 1e-3) continue;
                Vec3 centroid{0.0, 0.0, 0.0};
                for (const auto& p : v) centroid += p;
                s.points3 = std::move(v);
                s.probes3 = {centroid / static_cast<double>(params.n)};
                return s;
            }
            break;
        }
    }
    fail(ErrorCode::GenerationExhausted,
         "scene generation exhausted after " + std::to_string(kMaxSceneAttempts) + " attempts");
}

}  // namespace geoprobe
