#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "vec.hpp"

namespace geoprobe {

/// Positive division ratio. X divides PQ in ratio k when |PX| = k |XQ|, X between P and Q.
class Ratio {
public:
    explicit Ratio(double k) : k_(k) {
        require(std::isfinite(k) && k > 0.0, ErrorCode::InvalidInput, "ratio must be finite and positive");
    }
    double value() const noexcept { return k_; }

private:
    double k_;
};

template <std::size_t N>
struct Segment {
    Vec<N> a;
    Vec<N> b;

    Segment(const Vec<N>& a_, const Vec<N>& b_) : a(a_), b(b_) {}

    Vec<N> direction() const { return b - a; }
    double length() const { return dist(a, b); }
    Vec<N> at(double t) const { return a + t * (b - a); }
};

/// Infinite line through `point` along `direction` (not necessarily unit).
template <std::size_t N>
struct Line {
    Vec<N> point;
    Vec<N> direction;

    Vec<N> at(double t) const { return point + t * direction; }

    static Line through(const Vec<N>& p, const Vec<N>& q) { return {p, q - p}; }
};

using Line2 = Line<2>;
using Line3 = Line<3>;

/// Circle (N = 2) or sphere (N = 3).
template <std::size_t N>
struct Ball {
    Vec<N> center;
    double radius;

    Ball(const Vec<N>& c, double r) : center(c), radius(r) {
        require(all_finite(c) && std::isfinite(r) && r > 0.0, ErrorCode::InvalidInput,
                "radius must be finite and positive");
    }
};

using Circle = Ball<2>;
using Sphere = Ball<3>;

struct Plane {
    Vec3 point;
    Vec3 normal;  // unit
};

inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) { return 0.5 * cross(b - a, c - a); }

/// Non-degenerate planar triangle, stored counterclockwise.
/// Side naming follows the usual convention: side_a = |BC|, side_b = |CA|, side_c = |AB|.
class Triangle {
public:
    Triangle(const Vec2& a, const Vec2& b, const Vec2& c) : a_(a), b_(b), c_(c) {
        require(all_finite(a) && all_finite(b) && all_finite(c), ErrorCode::InvalidInput,
                "triangle vertices must be finite");
        const double area = signed_area(a, b, c);
        const double scale = std::max({dist_sq(a, b), dist_sq(b, c), dist_sq(c, a)});
        require(std::abs(area) > 1e-14 * scale && scale > 0.0, ErrorCode::InvalidInput, "degenerate triangle");
        if (area < 0.0) std::swap(b_, c_);
    }

    const Vec2& a() const { return a_; }
    const Vec2& b() const { return b_; }
    const Vec2& c() const { return c_; }
    const Vec2& vertex(std::size_t i) const { return i == 0 ? a_ : (i == 1 ? b_ : c_); }

    double side_a() const { return dist(b_, c_); }
    double side_b() const { return dist(c_, a_); }
    double side_c() const { return dist(a_, b_); }
    double sum_sq_sides() const { return dist_sq(b_, c_) + dist_sq(c_, a_) + dist_sq(a_, b_); }
    double diameter() const { return std::max({side_a(), side_b(), side_c()}); }
    double area() const { return signed_area(a_, b_, c_); }
    Vec2 centroid() const { return (a_ + b_ + c_) / 3.0; }

    /// Interior angles at A, B, C in radians.
    std::array<double, 3> angles() const {
        const double a = side_a(), b = side_b(), c = side_c();
        auto angle = [](double opp, double s1, double s2) {
            return std::acos(std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2), -1.0, 1.0));
        };
        return {angle(a, b, c), angle(b, c, a), angle(c, a, b)};
    }

    /// Barycentric coordinates of p (weights of A, B, C).
    std::array<double, 3> barycentric(const Vec2& p) const {
        const double total = area();
        return {signed_area(p, b_, c_) / total, signed_area(a_, p, c_) / total, signed_area(a_, b_, p) / total};
    }

    Vec2 from_barycentric(double wa, double wb, double wc) const { return wa * a_ + wb * b_ + wc * c_; }

private:
    Vec2 a_, b_, c_;
};

namespace detail {

inline double polygon_signed_area(const std::vector<Vec2>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * s;
}

inline int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double s = cross(b - a, c - a);
    return (s > 0.0) - (s < 0.0);
}

inline bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
           p.y() <= std::max(a.y(), b.y());
}

inline bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

inline bool is_simple(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Closed planar polygon with at least three vertices. Simple polygons are stored counterclockwise;
/// non-simple vertex cycles are kept in the given order with simple() == false.
class Polygon {
public:
    explicit Polygon(std::vector<Vec2> vertices) : v_(std::move(vertices)) {
        require(v_.size() >= 3, ErrorCode::InvalidInput, "polygon needs at least 3 vertices");
        for (std::size_t i = 0; i < v_.size(); ++i) {
            require(all_finite(v_[i]), ErrorCode::InvalidInput, "polygon vertices must be finite");
            require(!(v_[i] == v_[(i + 1) % v_.size()]), ErrorCode::InvalidInput,
                    "consecutive polygon vertices must be distinct");
        }
        simple_ = detail::is_simple(v_);
        if (simple_ && detail::polygon_signed_area(v_) < 0.0) {
            // Keep vertex 0 in place; reverse the rest.
            std::reverse(v_.begin() + 1, v_.end());
        }
    }

    std::size_t size() const { return v_.size(); }
    const Vec2& operator[](std::size_t i) const { return v_[i % v_.size()]; }
    const std::vector<Vec2>& vertices() const { return v_; }
    bool simple() const { return simple_; }

    Segment<2> side(std::size_t i) const { return {(*this)[i], (*this)[i + 1]}; }

    double signed_area() const { return detail::polygon_signed_area(v_); }

    double sum_sq_sides() const {
        double s = 0.0;
        for (std::size_t i = 0; i < size(); ++i) s += dist_sq((*this)[i], (*this)[i + 1]);
        return s;
    }

    double perimeter() const {
        double s = 0.0;
        for (std::size_t i = 0; i < size(); ++i) s += dist((*this)[i], (*this)[i + 1]);
        return s;
    }

    double diameter() const {
        double d = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j) d = std::max(d, dist(v_[i], v_[j]));
        return d;
    }

    Vec2 vertex_centroid() const {
        Vec2 s{0.0, 0.0};
        for (const auto& p : v_) s += p;
        return s / static_cast<double>(v_.size());
    }

    /// Even-odd containment test; boundary points are unspecified.
    bool contains(const Vec2& p) const {
        bool inside = false;
        for (std::size_t i = 0, j = size() - 1; i < size(); j = i++) {
            const Vec2& a = v_[i];
            const Vec2& b = v_[j];
            if ((a.y() > p.y()) != (b.y() > p.y())) {
                const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
                if (p.x() < x) inside = !inside;
            }
        }
        return inside;
    }

    double boundary_distance(const Vec2& p) const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < size(); ++i) {
            const Vec2 a = v_[i], b = (*this)[i + 1];
            const Vec2 d = b - a;
            const double t = std::clamp(dot(p - a, d) / norm_sq(d), 0.0, 1.0);
            best = std::min(best, dist(p, a + t * d));
        }
        return best;
    }

    static Polygon regular(std::size_t n, double radius = 1.0, Vec2 center = {0.0, 0.0}, double phase = 0.0) {
        std::vector<Vec2> v;
        v.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = phase + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
            v.push_back(center + Vec2{radius * std::cos(t), radius * std::sin(t)});
        }
        return Polygon(std::move(v));
    }

private:
    std::vector<Vec2> v_;
    bool simple_ = false;
};

/// Rotated ellipse with semi-axes a >= b > 0.
class Ellipse {
public:
    Ellipse(const Vec2& center, double a, double b, double rotation = 0.0)
        : center_(center), a_(a), b_(b), rotation_(rotation) {
        require(all_finite(center) && std::isfinite(a) && std::isfinite(b) && std::isfinite(rotation),
                ErrorCode::InvalidInput, "ellipse parameters must be finite");
        require(b > 0.0 && a >= b, ErrorCode::InvalidInput, "ellipse needs a >= b > 0");
    }

    const Vec2& center() const { return center_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double rotation() const { return rotation_; }

    Vec2 to_local(const Vec2& p) const {
        const Vec2 d = p - center_;
        const double cr = std::cos(rotation_), sr = std::sin(rotation_);
        return {cr * d.x() + sr * d.y(), -sr * d.x() + cr * d.y()};
    }

    Vec2 from_local_dir(const Vec2& d) const {
        const double cr = std::cos(rotation_), sr = std::sin(rotation_);
        return {cr * d.x() - sr * d.y(), sr * d.x() + cr * d.y()};
    }

    Vec2 to_local_dir(const Vec2& d) const {
        const double cr = std::cos(rotation_), sr = std::sin(rotation_);
        return {cr * d.x() + sr * d.y(), -sr * d.x() + cr * d.y()};
    }

    /// Point at parameter angle phi.
    Vec2 point_at(double phi) const { return center_ + from_local_dir({a_ * std::cos(phi), b_ * std::sin(phi)}); }

    /// Implicit function (x/a)^2 + (y/b)^2 - 1 in the ellipse frame.
    double implicit(const Vec2& p) const {
        const Vec2 q = to_local(p);
        return (q.x() / a_) * (q.x() / a_) + (q.y() / b_) * (q.y() / b_) - 1.0;
    }

    static Ellipse from_circle(const Circle& c) { return Ellipse(c.center, c.radius, c.radius, 0.0); }

private:
    Vec2 center_;
    double a_, b_, rotation_;
};

}  // namespace geoprobe
