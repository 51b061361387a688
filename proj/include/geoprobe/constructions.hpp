#pragma once

// Euclidean constructions used by the theorem checkers and explorers. Pure functions.

#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "error.hpp"
#include "primitives.hpp"
#include "tolerance.hpp"
#include "vec.hpp"

namespace geoprobe {

template <std::size_t N>
struct Foot {
    Vec<N> point;
    double t;            // parameter on the supporting line, 0 at line.a and 1 at line.b
    bool inside_segment; // t in [0, 1]
};

/// Orthogonal projection of m onto the supporting line of `line`.
template <std::size_t N>
Foot<N> project_to_line(const Vec<N>& m, const Segment<N>& line) {
    const Vec<N> d = line.b - line.a;
    const double len_sq = norm_sq(d);
    require(len_sq > 0.0 && std::isfinite(len_sq), ErrorCode::InvalidInput, "degenerate line");
    const double t = dot(m - line.a, d) / len_sq;
    return {line.a + t * d, t, t >= 0.0 && t <= 1.0};
}

inline Vec3 project_to_plane(const Vec3& m, const Plane& plane) {
    require(std::abs(norm(plane.normal) - 1.0) <= 1e-12, ErrorCode::InvalidInput, "plane normal must be unit");
    return m - dot(m - plane.point, plane.normal) * plane.normal;
}

/// Point X on PQ with |PX| = k |XQ|.
template <std::size_t N>
Vec<N> divide_segment(const Vec<N>& p, const Vec<N>& q, Ratio k) {
    require(!(p == q), ErrorCode::InvalidInput, "cannot divide a zero-length segment");
    return (p + k.value() * q) / (1.0 + k.value());
}

/// Intersection of two planar lines. Throws a parallel-lines error (coincident or disjoint)
/// when |cross(d1, d2)| < kParallelEps * |d1| |d2|.
inline Vec2 line_line_intersection_2d(const Line2& l1, const Line2& l2) {
    const double n1 = norm(l1.direction), n2 = norm(l2.direction);
    require(n1 > 0.0 && n2 > 0.0, ErrorCode::InvalidInput, "line direction must be non-zero");
    const double denom = cross(l1.direction, l2.direction);
    if (std::abs(denom) < kParallelEps * n1 * n2) {
        const Vec2 w = l2.point - l1.point;
        const double offset = std::abs(cross(w, l1.direction)) / n1;
        const double scale = std::max(1.0, norm(w));
        if (offset <= kParallelEps * scale) fail(ErrorCode::ParallelCoincident, "lines coincide");
        fail(ErrorCode::ParallelDisjoint, "lines are parallel");
    }
    const double s = cross(l2.point - l1.point, l2.direction) / denom;
    return l1.at(s);
}

struct CevianFoot {
    Vec2 point;
    double t;  // parameter on the opposite side, 0 at side.a and 1 at side.b
};

/// Where the line from `vertex` through `through` meets the supporting line of `opposite_side`.
inline CevianFoot cevian_foot(const Vec2& vertex, const Vec2& through, const Segment<2>& opposite_side) {
    require(!(vertex == through), ErrorCode::InvalidInput, "cevian needs two distinct points");
    const Vec2 side_dir = opposite_side.b - opposite_side.a;
    require(norm_sq(side_dir) > 0.0, ErrorCode::InvalidInput, "degenerate side");
    Vec2 p;
    try {
        p = line_line_intersection_2d({vertex, through - vertex}, {opposite_side.a, side_dir});
    } catch (const Error& e) {
        if (e.is_parallel()) fail(ErrorCode::NoIntersection, "cevian is parallel to the opposite side");
        throw;
    }
    const double t = dot(p - opposite_side.a, side_dir) / norm_sq(side_dir);
    return {p, t};
}

/// Squared length of the cevian from A to the point A1 on BC with |BA1| = k |BC|.
inline double stewart_cevian_length_sq(double side_a, double side_b, double side_c, double k) {
    require(side_a > 0.0 && side_b > 0.0 && side_c > 0.0, ErrorCode::InvalidInput, "sides must be positive");
    require(side_a < side_b + side_c && side_b < side_c + side_a && side_c < side_a + side_b, ErrorCode::InvalidInput,
            "sides violate the strict triangle inequality");
    require(k > 0.0 && k < 1.0, ErrorCode::InvalidInput, "division fraction must lie in (0, 1)");
    return (1.0 - k) * side_c * side_c + k * side_b * side_b - (1.0 - k) * k * side_a * side_a;
}

template <std::size_t N>
bool on_ball(const Ball<N>& c, const Vec<N>& p) {
    return std::abs(dist(p, c.center) - c.radius) <= kOnCurveEps * c.radius;
}

/// The other point where the line through `through` (on c) along `direction` meets c.
/// Returns `through` itself for a tangent direction. Works for circles and spheres.
template <std::size_t N>
Vec<N> circle_line_second_intersection(const Ball<N>& c, const Vec<N>& through, const Vec<N>& direction) {
    require(on_ball(c, through), ErrorCode::InvalidInput, "point is not on the circle");
    const double dd = norm_sq(direction);
    require(dd > 0.0, ErrorCode::InvalidInput, "direction must be non-zero");
    const double t = -2.0 * dot(through - c.center, direction) / dd;
    return through + t * direction;
}

/// Second-intersection parameter t (point = through + t * direction) without the on-circle check.
template <std::size_t N>
double second_intersection_parameter(const Ball<N>& c, const Vec<N>& through, const Vec<N>& direction) {
    return -2.0 * dot(through - c.center, direction) / norm_sq(direction);
}

/// Tangent line at p with unit direction.
inline Line2 tangent_line_at(const Circle& c, const Vec2& p) {
    require(on_ball(c, p), ErrorCode::InvalidInput, "point is not on the circle");
    return {p, normalized(perp(p - c.center))};
}

/// Both intersections of a line with a circle, ordered by line parameter. Throws no-intersection
/// when the line misses the circle or is tangent (discriminant below kParallelEps * scale^2).
inline std::pair<Vec2, Vec2> circle_line_intersections(const Circle& c, const Line2& line) {
    const double dd = norm_sq(line.direction);
    require(dd > 0.0, ErrorCode::InvalidInput, "direction must be non-zero");
    const Vec2 w = line.point - c.center;
    const double b = dot(w, line.direction) / dd;
    const double cc = (norm_sq(w) - c.radius * c.radius) / dd;
    const double disc = b * b - cc;
    const double scale_sq = c.radius * c.radius / dd;
    if (disc < kParallelEps * scale_sq) fail(ErrorCode::NoIntersection, "line misses or touches the circle");
    const double s = std::sqrt(disc);
    return {line.at(-b - s), line.at(-b + s)};
}

/// The two intersection points of transversally intersecting circles. The first is to the left of
/// the center line c1 -> c2.
inline std::pair<Vec2, Vec2> circle_circle_intersection(const Circle& c1, const Circle& c2) {
    const Vec2 d = c2.center - c1.center;
    const double len = norm(d);
    const double r1 = c1.radius, r2 = c2.radius;
    if (!(len < r1 + r2 && len > std::abs(r1 - r2)))
        fail(ErrorCode::NoIntersection, "circles do not intersect transversally");
    const double along = (len * len + r1 * r1 - r2 * r2) / (2.0 * len);
    const double h_sq = r1 * r1 - along * along;
    if (h_sq <= kParallelEps * r1 * r1) fail(ErrorCode::NoIntersection, "circles are tangent");
    const double h = std::sqrt(h_sq);
    const Vec2 u = d / len;
    const Vec2 base = c1.center + along * u;
    return {base + h * perp(u), base - h * perp(u)};
}

struct IntersectionCircle {
    Vec3 center;
    double radius;
    Vec3 normal;  // unit, parallel to c2 - c1

    /// Orthonormal basis (u, v) spanning the circle's plane.
    std::pair<Vec3, Vec3> plane_basis() const {
        const Vec3 helper = std::abs(normal.x()) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
        const Vec3 u = normalized(cross(normal, helper));
        return {u, cross(normal, u)};
    }

    Vec3 point_at(double angle) const {
        const auto [u, v] = plane_basis();
        return center + radius * (std::cos(angle) * u + std::sin(angle) * v);
    }
};

inline IntersectionCircle sphere_sphere_intersection_circle(const Sphere& s1, const Sphere& s2) {
    const Vec3 d = s2.center - s1.center;
    const double len = norm(d);
    const double r1 = s1.radius, r2 = s2.radius;
    if (!(len < r1 + r2 && len > std::abs(r1 - r2)))
        fail(ErrorCode::NoCircle, "spheres are disjoint, nested or tangent");
    const double along = (len * len + r1 * r1 - r2 * r2) / (2.0 * len);
    const double h_sq = r1 * r1 - along * along;
    if (h_sq <= kParallelEps * r1 * r1) fail(ErrorCode::NoCircle, "spheres are tangent");
    const Vec3 n = d / len;
    return {s1.center + along * n, std::sqrt(h_sq), n};
}

/// Angle guard for acuteness: every vertex must satisfy (B-A).(C-A) > guard * |AB| |AC|.
inline constexpr double kAcuteGuard = 1e-12;

inline bool is_strictly_acute(const Triangle& t, double guard = kAcuteGuard) {
    for (std::size_t i = 0; i < 3; ++i) {
        const Vec2& p = t.vertex(i);
        const Vec2& q = t.vertex((i + 1) % 3);
        const Vec2& r = t.vertex((i + 2) % 3);
        if (dot(q - p, r - p) <= guard * dist(q, p) * dist(r, p)) return false;
    }
    return true;
}

/// Feet of the altitudes: A' on BC, B' on CA, C' on AB.
inline std::array<Vec2, 3> orthic_feet(const Triangle& t) {
    require(is_strictly_acute(t), ErrorCode::Domain, "orthic triangle requires a strictly acute triangle");
    const auto fa = project_to_line(t.a(), Segment<2>{t.b(), t.c()});
    const auto fb = project_to_line(t.b(), Segment<2>{t.c(), t.a()});
    const auto fc = project_to_line(t.c(), Segment<2>{t.a(), t.b()});
    return {fa.point, fb.point, fc.point};
}

/// Second intersection of a line through a point of the ellipse.
inline Vec2 ellipse_line_second_intersection(const Ellipse& e, const Vec2& through, const Vec2& direction) {
    require(std::abs(e.implicit(through)) <= 1e-9, ErrorCode::InvalidInput, "point is not on the ellipse");
    const Vec2 p = e.to_local(through);
    const Vec2 d = e.to_local_dir(direction);
    const double ia = 1.0 / (e.a() * e.a()), ib = 1.0 / (e.b() * e.b());
    const double qa = d.x() * d.x() * ia + d.y() * d.y() * ib;
    require(qa > 0.0, ErrorCode::InvalidInput, "direction must be non-zero");
    const double t = -2.0 * (p.x() * d.x() * ia + p.y() * d.y() * ib) / qa;
    return through + t * direction;
}

}  // namespace geoprobe
