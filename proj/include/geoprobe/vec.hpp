#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <algorithm>

namespace geoprobe {

/// Fixed-dimension Euclidean point / vector. Only N = 2 and N = 3 are used.
template <std::size_t N>
struct Vec {
    static_assert(N == 2 || N == 3, "geoprobe works in the plane or in space");
    static constexpr std::size_t dim = N;

    std::array<double, N> c{};

    constexpr Vec() = default;
    constexpr Vec(double x, double y) requires(N == 2) : c{x, y} {}
    constexpr Vec(double x, double y, double z) requires(N == 3) : c{x, y, z} {}

    constexpr double x() const { return c[0]; }
    constexpr double y() const { return c[1]; }
    constexpr double z() const requires(N == 3) { return c[2]; }

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    constexpr Vec& operator+=(const Vec& o) {
        for (std::size_t i = 0; i < N; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr Vec& operator-=(const Vec& o) {
        for (std::size_t i = 0; i < N; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr Vec& operator*=(double s) {
        for (auto& v : c) v *= s;
        return *this;
    }
    constexpr Vec& operator/=(double s) {
        for (auto& v : c) v /= s;
        return *this;
    }

    friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend constexpr Vec operator-(Vec a) { return a *= -1.0; }
    friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
    friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
    friend constexpr Vec operator/(Vec a, double s) { return a /= s; }
    friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <std::size_t N>
constexpr double dot(const Vec<N>& a, const Vec<N>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t N>
constexpr double norm_sq(const Vec<N>& a) { return dot(a, a); }

template <std::size_t N>
inline double norm(const Vec<N>& a) { return std::sqrt(norm_sq(a)); }

template <std::size_t N>
inline double dist(const Vec<N>& a, const Vec<N>& b) { return norm(a - b); }

template <std::size_t N>
constexpr double dist_sq(const Vec<N>& a, const Vec<N>& b) { return norm_sq(a - b); }

/// z-component of the planar cross product.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x()};
}

/// Counterclockwise quarter turn.
constexpr Vec2 perp(const Vec2& a) { return {-a.y(), a.x()}; }

template <std::size_t N>
inline Vec<N> normalized(const Vec<N>& a) { return a / norm(a); }

template <std::size_t N>
inline bool all_finite(const Vec<N>& a) {
    return std::all_of(a.c.begin(), a.c.end(), [](double v) { return std::isfinite(v); });
}

/// Embeds a planar point in z = 0.
constexpr Vec3 lift(const Vec2& a, double z = 0.0) { return {a.x(), a.y(), z}; }

template <std::size_t N>
inline Vec<N> lerp(const Vec<N>& a, const Vec<N>& b, double t) { return a + t * (b - a); }

}  // namespace geoprobe
