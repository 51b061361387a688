#pragma once

// Executable checkers for the nine solved problems. Each evaluates both sides of a claim on one
// configuration; verify() runs a checker over seeded random scenes and aggregates a CheckReport.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "constructions.hpp"
#include "nelder_mead.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "scene.hpp"
#include "tolerance.hpp"

namespace geoprobe {

/// Minimum barycentric weight for a point to count as strictly interior.
inline constexpr double kInteriorGuard = 1e-9;

namespace detail {

inline double rel_ratio_residual(double lhs, double rhs) { return std::abs(lhs / rhs - 1.0); }

inline void require_interior(const Triangle& t, const Vec2& p) {
    for (double w : t.barycentric(p))
        require(w > kInteriorGuard, ErrorCode::Domain, "point must lie strictly inside the triangle");
}

inline CheckReport single_report(std::string id, double tol, double residual) {
    return aggregate_residuals(std::move(id), 0, tol, {residual});
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Projection identity on the sides of a polygon (any closed vertex cycle, any dimension).

/// |sum |M_i A_i|^2 - sum |M_i A_{i+1}|^2| / sum |A_i A_{i+1}|^2, M_i the foot of m on line A_i A_{i+1}.
template <std::size_t N>
double projection_identity_residual(const std::vector<Vec<N>>& cycle, const Vec<N>& m) {
    require(cycle.size() >= 3, ErrorCode::InvalidInput, "cycle needs at least 3 vertices");
    double lhs = 0.0, rhs = 0.0, sides = 0.0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const Vec<N>& a = cycle[i];
        const Vec<N>& b = cycle[(i + 1) % cycle.size()];
        const Vec<N> foot = project_to_line(m, Segment<N>{a, b}).point;
        lhs += dist_sq(foot, a);
        rhs += dist_sq(foot, b);
        sides += dist_sq(a, b);
    }
    return TolerancePolicy::squared_length(lhs, rhs, sides);
}

inline CheckReport check_t1(const Polygon& polygon, const Vec2& m, double tol = 1e-9) {
    require(all_finite(m), ErrorCode::InvalidInput, "probe point must be finite");
    return detail::single_report("t1", tol, projection_identity_residual(polygon.vertices(), m));
}

// ---------------------------------------------------------------------------------------------
// Tangents at the intersection points of secants with a circle.

struct TangentPolygonReport {
    std::vector<Vec2> tangency_points;            // distinct, sorted by angle around the center
    std::vector<Line2> tangents;                  // one per distinct tangency point
    std::vector<std::optional<Vec2>> poles;       // per secant; empty when its tangents are parallel
    std::vector<Vec2> intersections;              // all pairwise tangent-tangent intersections
    bool polygon_formed = false;
    std::vector<Vec2> polygon;                    // tangential polygon when formed
    double max_pole_residual = 0.0;               // tangent-intersection pole vs closed-form pole
    double max_polar_residual = 0.0;              // pole-polar incidence
};

inline TangentPolygonReport check_t2_tangent_polygon(const Circle& c, const std::vector<Line2>& secants) {
    require(!secants.empty(), ErrorCode::InvalidInput, "at least one secant is required");
    TangentPolygonReport rep;
    const double r2 = c.radius * c.radius;
    std::vector<Vec2> raw;
    for (const auto& s : secants) {
        std::pair<Vec2, Vec2> pq;
        try {
            pq = circle_line_intersections(c, s);
        } catch (const Error&) {
            fail(ErrorCode::InvalidInput, "every secant must meet the circle in two distinct points");
        }
        const auto [p, q] = pq;
        raw.push_back(p);
        raw.push_back(q);
        const Line2 tp = tangent_line_at(c, p), tq = tangent_line_at(c, q);
        try {
            const Vec2 pole = line_line_intersection_2d(tp, tq);
            const Vec2 mid = 0.5 * (p + q);
            const Vec2 closed = c.center + r2 * (mid - c.center) / norm_sq(mid - c.center);
            const double scale = std::max(c.radius, dist(closed, c.center));
            rep.max_pole_residual = std::max(rep.max_pole_residual, dist(pole, closed) / scale);
            for (const Vec2& x : {p, q}) {
                const double incidence = dot(x - c.center, pole - c.center);
                rep.max_polar_residual = std::max(rep.max_polar_residual, std::abs(incidence - r2) / r2);
            }
            rep.poles.emplace_back(pole);
        } catch (const Error& e) {
            if (!e.is_parallel()) throw;
            rep.poles.emplace_back(std::nullopt);
        }
    }

    auto angle_of = [&](const Vec2& p) {
        const double a = std::atan2(p.y() - c.center.y(), p.x() - c.center.x());
        return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
    };
    std::sort(raw.begin(), raw.end(), [&](const Vec2& a, const Vec2& b) { return angle_of(a) < angle_of(b); });
    for (const auto& p : raw) {
        const bool dup = std::any_of(rep.tangency_points.begin(), rep.tangency_points.end(),
                                     [&](const Vec2& q) { return dist(p, q) < 1e-9 * c.radius; });
        if (!dup) rep.tangency_points.push_back(p);
    }
    for (const auto& p : rep.tangency_points) rep.tangents.push_back(tangent_line_at(c, p));

    for (std::size_t i = 0; i < rep.tangents.size(); ++i) {
        for (std::size_t j = i + 1; j < rep.tangents.size(); ++j) {
            try {
                rep.intersections.push_back(line_line_intersection_2d(rep.tangents[i], rep.tangents[j]));
            } catch (const Error& e) {
                if (!e.is_parallel()) throw;
            }
        }
    }

    // Tangential polygon: consecutive tangency points (by angle) must be less than a half turn
    // apart, and the consecutive tangent intersections must form a strictly convex polygon.
    const std::size_t m = rep.tangency_points.size();
    if (m >= 3) {
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            const double a0 = angle_of(rep.tangency_points[i]);
            const double a1 = angle_of(rep.tangency_points[(i + 1) % m]);
            double gap = a1 - a0;
            if (i + 1 == m) gap += 2.0 * std::numbers::pi;
            ok = gap > 0.0 && gap < std::numbers::pi * (1.0 - 1e-12);
        }
        std::vector<Vec2> poly;
        for (std::size_t i = 0; i < m && ok; ++i) {
            try {
                poly.push_back(line_line_intersection_2d(rep.tangents[i], rep.tangents[(i + 1) % m]));
            } catch (const Error&) {
                ok = false;
            }
        }
        for (std::size_t i = 0; i < m && ok; ++i)
            ok = cross(poly[(i + 1) % m] - poly[i], poly[(i + 2) % m] - poly[(i + 1) % m]) > 0.0;
        if (ok) {
            rep.polygon_formed = true;
            rep.polygon = std::move(poly);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Cevian ratio sum and product through an interior point.

struct CevianRatios {
    double x = 0.0;  // |AC'| / |C'B|
    double y = 0.0;  // |AB'| / |B'C|
    double z = 0.0;  // |BA'| / |A'C|
    double E = 0.0;
    double F = 0.0;
    std::array<double, 3> vertex_ratios{};  // |PA|/|PA'|, |PB|/|PB'|, |PC|/|PC'|
    std::array<Vec2, 3> feet{};              // A', B', C'
};

struct T3Evaluation {
    CevianRatios ratios;
    double van_aubel_residual = 0.0;
    double residual = 0.0;
};

inline std::array<Vec2, 3> cevian_feet(const Triangle& t, const Vec2& p) {
    return {cevian_foot(t.a(), p, {t.b(), t.c()}).point, cevian_foot(t.b(), p, {t.c(), t.a()}).point,
            cevian_foot(t.c(), p, {t.a(), t.b()}).point};
}

inline T3Evaluation evaluate_t3(const Triangle& t, const Vec2& p) {
    detail::require_interior(t, p);
    const auto feet = cevian_feet(t, p);
    const Vec2 &a = t.a(), &b = t.b(), &c = t.c();
    const Vec2 &fa = feet[0], &fb = feet[1], &fc = feet[2];
    T3Evaluation ev;
    auto& r = ev.ratios;
    r.feet = feet;
    r.x = dist(a, fc) / dist(fc, b);
    r.y = dist(a, fb) / dist(fb, c);
    r.z = dist(b, fa) / dist(fa, c);
    r.vertex_ratios = {dist(p, a) / dist(p, fa), dist(p, b) / dist(p, fb), dist(p, c) / dist(p, fc)};
    r.E = r.vertex_ratios[0] + r.vertex_ratios[1] + r.vertex_ratios[2];
    r.F = r.vertex_ratios[0] * r.vertex_ratios[1] * r.vertex_ratios[2];

    // Van Aubel at each vertex: the vertex ratio equals the sum of the two adjacent side ratios.
    const std::array<double, 3> van_aubel{r.x + r.y, r.z + 1.0 / r.x, 1.0 / r.z + 1.0 / r.y};
    for (std::size_t i = 0; i < 3; ++i)
        ev.van_aubel_residual =
            std::max(ev.van_aubel_residual, TolerancePolicy::relative(r.vertex_ratios[i], van_aubel[i]));
    ev.residual = std::max({ev.van_aubel_residual, std::max(0.0, 6.0 - r.E), std::max(0.0, 8.0 - r.F)});
    return ev;
}

inline std::pair<CevianRatios, CheckReport> check_t3(const Triangle& t, const Vec2& p, double tol = 1e-9) {
    const auto ev = evaluate_t3(t, p);
    auto rep = detail::single_report("t3", tol, ev.residual);
    rep.extras = {{"E", ev.ratios.E}, {"F", ev.ratios.F}, {"van_aubel_residual", ev.van_aubel_residual}};
    return {ev.ratios, rep};
}

/// E(P) with +inf outside the guarded interior.
inline double cevian_sum_objective(const Triangle& t, const Vec2& p) {
    for (double w : t.barycentric(p))
        if (!(w > kInteriorGuard)) return std::numeric_limits<double>::infinity();
    return evaluate_t3(t, p).ratios.E;
}

/// Derivative-free minimization of E(P) from `start`.
inline NelderMeadResult minimize_cevian_sum(const Triangle& t, const Vec2& start) {
    NelderMeadOptions opt;
    opt.initial_step = 0.05 * t.diameter();
    opt.xtol = 1e-9 * t.diameter();
    return nelder_mead([&](const std::vector<double>& x) { return cevian_sum_objective(t, {x[0], x[1]}); },
                       {start.x(), start.y()}, opt);
}

// ---------------------------------------------------------------------------------------------
// Sum of squared cevians dividing the sides in the same ratio.

struct T4Evaluation {
    double direct_sum = 0.0;
    double formula = 0.0;
    double stewart_residual = 0.0;
    double residual = 0.0;
};

/// Cevian feet with |BA1| = k|BC|, |CB1| = k|CA|, |AC1| = k|AB|.
inline std::array<Vec2, 3> same_ratio_feet(const Triangle& t, double k) {
    return {lerp(t.b(), t.c(), k), lerp(t.c(), t.a(), k), lerp(t.a(), t.b(), k)};
}

inline double same_ratio_cevian_sum(const Triangle& t, double k) {
    const auto f = same_ratio_feet(t, k);
    return dist_sq(t.a(), f[0]) + dist_sq(t.b(), f[1]) + dist_sq(t.c(), f[2]);
}

inline T4Evaluation evaluate_t4(const Triangle& t, double k) {
    require(k > 0.0 && k < 1.0, ErrorCode::Domain, "division fraction must lie in (0, 1)");
    T4Evaluation ev;
    const double sides = t.sum_sq_sides();
    ev.direct_sum = same_ratio_cevian_sum(t, k);
    ev.formula = (k * k - k + 1.0) * sides;
    const double a = t.side_a(), b = t.side_b(), c = t.side_c();
    const double stewart = stewart_cevian_length_sq(a, b, c, k) + stewart_cevian_length_sq(b, c, a, k) +
                           stewart_cevian_length_sq(c, a, b, k);
    ev.stewart_residual = TolerancePolicy::squared_length(stewart, ev.direct_sum, sides);
    ev.residual = std::max(TolerancePolicy::squared_length(ev.direct_sum, ev.formula, sides), ev.stewart_residual);
    return ev;
}

struct T4Sweep {
    double argmin = 0.0;
    double min_value = 0.0;
    double min_ratio = 0.0;          // min_value / sum of squared sides
    double identity_residual = 0.0;  // worst over the grid
    double quadratic_fit_residual = 0.0;
    std::size_t samples = 0;
};

inline constexpr double kInvGolden = 0.6180339887498949;

/// Golden-section minimization on [lo, hi].
template <typename Fn>
double golden_section_min(Fn&& f, double lo, double hi, double xtol = 1e-12) {
    double x1 = hi - kInvGolden * (hi - lo), x2 = lo + kInvGolden * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > xtol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvGolden * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvGolden * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

/// Exact quadratic through three samples, evaluated at x.
inline double three_point_quadratic(double x0, double y0, double x1, double y1, double x2, double y2, double x) {
    return y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) + y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
           y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
}

/// Sweeps k over [0.01, 0.99] in steps of 1e-3, then refines the minimum by golden section.
inline T4Sweep sweep_t4(const Triangle& t, double step = 1e-3) {
    T4Sweep sw;
    const double sides = t.sum_sq_sides();
    auto S = [&](double k) { return same_ratio_cevian_sum(t, k); };
    const double k0 = 0.01, k2 = 0.99, k1 = 0.5;
    const double s0 = S(k0), s1 = S(k1), s2 = S(k2);
    const auto steps = static_cast<std::size_t>(std::llround((k2 - k0) / step));
    double best_k = k0, best = S(k0);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double k = k0 + static_cast<double>(i) * step;
        const double v = S(k);
        sw.identity_residual =
            std::max(sw.identity_residual, TolerancePolicy::squared_length(v, (k * k - k + 1.0) * sides, sides));
        sw.quadratic_fit_residual = std::max(
            sw.quadratic_fit_residual, std::abs(three_point_quadratic(k0, s0, k1, s1, k2, s2, k) - v) / sides);
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    sw.samples = steps + 1;
    sw.argmin = golden_section_min(S, std::max(k0, best_k - step), std::min(k2, best_k + step));
    sw.min_value = S(sw.argmin);
    sw.min_ratio = sw.min_value / sides;
    return sw;
}

inline std::pair<CheckReport, T4Sweep> check_t4(const Triangle& t, double k, double tol = 1e-9) {
    const auto ev = evaluate_t4(t, k);
    const auto sw = sweep_t4(t);
    const double residual = std::max({ev.residual, sw.identity_residual, sw.quadratic_fit_residual,
                                      std::abs(sw.argmin - 0.5) < 1e-6 ? 0.0 : std::abs(sw.argmin - 0.5),
                                      std::abs(sw.min_ratio - 0.75)});
    auto rep = detail::single_report("t4", tol, residual);
    rep.extras = {{"direct_sum", ev.direct_sum},       {"formula", ev.formula},      {"argmin", sw.argmin},
                  {"min_value", sw.min_value},          {"min_ratio", sw.min_ratio},
                  {"quadratic_fit_residual", sw.quadratic_fit_residual}};
    return {rep, sw};
}

// ---------------------------------------------------------------------------------------------
// Concurrency of cevians under the squared-leg condition.

enum class Holds { Yes, No, Ambiguous };

/// Hysteresis: holds below tol, fails above 10 tol.
inline Holds hysteresis(double residual, double tol) {
    if (residual < tol) return Holds::Yes;
    if (residual > 10.0 * tol) return Holds::No;
    return Holds::Ambiguous;
}

struct ConcurrencyWitness {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    double condition_residual = 0.0;  // |alpha + beta + gamma| / sum of squared sides
    double ceva_product = 0.0;
    double product_lhs = 0.0, product_rhs = 0.0;
    double product_residual = 0.0;    // |lhs - rhs| / (abc)^2
    double intersection_spread = 0.0;
    double spread_relative = 0.0;     // spread / diameter
    Holds squared_leg_condition = Holds::Ambiguous;
    Holds product_condition = Holds::Ambiguous;
    Holds concurrent = Holds::Ambiguous;
};

namespace detail {

inline double side_parameter(const Vec2& p, const Vec2& from, const Vec2& to) {
    const Vec2 d = to - from;
    return dot(p - from, d) / norm_sq(d);
}

inline void require_inside_side(const Vec2& foot, const Vec2& from, const Vec2& to) {
    const double t = side_parameter(foot, from, to);
    require(t > 1e-12 && t < 1.0 - 1e-12, ErrorCode::Domain, "cevian foot must lie strictly inside its side");
    const double off = std::abs(cross(foot - from, to - from)) / dist(from, to);
    require(off <= 1e-9 * std::max(1.0, dist(from, to)), ErrorCode::InvalidInput, "cevian foot is not on its side");
}

}  // namespace detail

/// feet = (A1 on BC, B1 on CA, C1 on AB).
inline ConcurrencyWitness evaluate_t5(const Triangle& t, const std::array<Vec2, 3>& feet, double tol = 1e-9) {
    const Vec2 &A = t.a(), &B = t.b(), &C = t.c();
    const Vec2 &A1 = feet[0], &B1 = feet[1], &C1 = feet[2];
    detail::require_inside_side(A1, B, C);
    detail::require_inside_side(B1, C, A);
    detail::require_inside_side(C1, A, B);
    const double a = t.side_a(), b = t.side_b(), c = t.side_c();

    ConcurrencyWitness w;
    w.alpha = a * (dist(A1, B) - dist(A1, C));
    w.beta = b * (dist(B1, C) - dist(B1, A));
    w.gamma = c * (dist(C1, A) - dist(C1, B));
    w.condition_residual = std::abs(w.alpha + w.beta + w.gamma) / t.sum_sq_sides();
    w.ceva_product = (dist(A1, B) / dist(A1, C)) * (dist(B1, C) / dist(B1, A)) * (dist(C1, A) / dist(C1, B));
    w.product_lhs = (a * a + w.alpha) * (b * b + w.beta) * (c * c + w.gamma);
    w.product_rhs = (a * a - w.alpha) * (b * b - w.beta) * (c * c - w.gamma);
    const double abc = a * b * c;
    w.product_residual = std::abs(w.product_lhs - w.product_rhs) / (abc * abc);

    const Line2 la = Line2::through(A, A1), lb = Line2::through(B, B1), lc = Line2::through(C, C1);
    const Vec2 pab = line_line_intersection_2d(la, lb);
    const Vec2 pbc = line_line_intersection_2d(lb, lc);
    const Vec2 pca = line_line_intersection_2d(lc, la);
    w.intersection_spread = std::max({dist(pab, pbc), dist(pbc, pca), dist(pca, pab)});
    w.spread_relative = w.intersection_spread / t.diameter();

    w.squared_leg_condition = hysteresis(w.condition_residual, tol);
    w.product_condition = hysteresis(w.product_residual, tol);
    w.concurrent = hysteresis(w.spread_relative, tol);
    return w;
}

/// 0 when concurrency and the product condition agree decisively, 1 otherwise.
inline double t5_equivalence_residual(const ConcurrencyWitness& w) {
    if (w.concurrent == Holds::Ambiguous || w.concurrent != w.product_condition) return 1.0;
    return w.concurrent == Holds::Yes ? std::max(w.product_residual, w.spread_relative) : 0.0;
}

inline std::pair<ConcurrencyWitness, CheckReport> check_t5(const Triangle& t, const std::array<Vec2, 3>& feet,
                                                           double tol = 1e-9) {
    const auto w = evaluate_t5(t, feet, tol);
    auto rep = detail::single_report("t5", tol, t5_equivalence_residual(w));
    auto holds = [](Holds h) { return h == Holds::Yes ? "true" : (h == Holds::No ? "false" : "ambiguous"); };
    rep.extras = {{"alpha", w.alpha},
                  {"beta", w.beta},
                  {"gamma", w.gamma},
                  {"condition_residual", w.condition_residual},
                  {"ceva_product", w.ceva_product},
                  {"product_residual", w.product_residual},
                  {"intersection_spread", w.intersection_spread},
                  {"squared_leg_condition", holds(w.squared_leg_condition)},
                  {"product_condition", holds(w.product_condition)},
                  {"concurrent", holds(w.concurrent)}};
    return {w, rep};
}

/// Feet with A1 = B + u(C - B), B1 = C + v(A - C), and C1 on AB chosen so that
/// alpha + beta + gamma = 0. Returns nullopt when no such C1 lies strictly inside AB.
inline std::optional<std::array<Vec2, 3>> construct_condition_feet(const Triangle& t, double u, double v) {
    const Vec2 &A = t.a(), &B = t.b(), &C = t.c();
    const Vec2 A1 = lerp(B, C, u), B1 = lerp(C, A, v);
    const double a = t.side_a(), b = t.side_b(), c = t.side_c();
    const double alpha = a * (dist(A1, B) - dist(A1, C));
    const double beta = b * (dist(B1, C) - dist(B1, A));
    const double s = (c * c - alpha - beta) / (2.0 * c);  // |C1 A|
    if (!(s > 1e-6 * c && s < (1.0 - 1e-6) * c)) return std::nullopt;
    return std::array<Vec2, 3>{A1, B1, lerp(A, B, s / c)};
}

namespace detail {

/// |C1A| from the squared-leg condition minus |C1A| from Ceva, for given u, v.
inline double t5_mismatch(const Triangle& t, double u, double v) {
    const double a = t.side_a(), b = t.side_b(), c = t.side_c();
    const double ba1 = u * a, a1c = (1.0 - u) * a;
    const double cb1 = v * b, b1a = (1.0 - v) * b;
    const double s_cond = (c * c - a * (ba1 - a1c) - b * (cb1 - b1a)) / (2.0 * c);
    const double rho = (a1c / ba1) * (b1a / cb1);  // |AC1| / |C1B| by Ceva
    const double s_ceva = c * rho / (1.0 + rho);
    return s_cond - s_ceva;
}

}  // namespace detail

/// Feet satisfying the squared-leg condition whose cevians also concur: for the given u, solves
/// for v by a grid scan plus bisection. Returns nullopt when no root exists for this u.
inline std::optional<std::array<Vec2, 3>> construct_concurrent_feet(const Triangle& t, double u) {
    constexpr int kGrid = 256;
    double prev_v = 1e-4, prev = detail::t5_mismatch(t, u, prev_v);
    for (int i = 1; i <= kGrid; ++i) {
        const double v = 1e-4 + (1.0 - 2e-4) * static_cast<double>(i) / kGrid;
        const double cur = detail::t5_mismatch(t, u, v);
        if ((prev < 0.0) != (cur < 0.0)) {
            double lo = prev_v, hi = v, flo = prev;
            for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double fm = detail::t5_mismatch(t, u, mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            // Place C1 by Ceva so the cevians concur to rounding; the condition then holds at the root.
            const double a = t.side_a(), b = t.side_b(), c = t.side_c();
            const double rho = ((1.0 - u) * a / (u * a)) * ((1.0 - root) * b / (root * b));
            const double s = c * rho / (1.0 + rho);
            if (!(s > 1e-6 * c && s < (1.0 - 1e-6) * c)) return std::nullopt;
            return std::array<Vec2, 3>{lerp(t.b(), t.c(), u), lerp(t.c(), t.a(), root), lerp(t.a(), t.b(), s / c)};
        }
        prev = cur;
        prev_v = v;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// Product of cevian ratios.

struct T6Evaluation {
    double lhs = 0.0;
    double rhs = 0.0;
    std::array<double, 3> relation_residuals{};
    double residual = 0.0;
};

inline T6Evaluation evaluate_t6(const Triangle& t, const Vec2& p) {
    detail::require_interior(t, p);
    const auto f = cevian_feet(t, p);
    const Vec2 &A = t.a(), &B = t.b(), &C = t.c();
    const Vec2 &A1 = f[0], &B1 = f[1], &C1 = f[2];
    const double ra = dist(p, A) / dist(p, A1);
    const double rb = dist(p, B) / dist(p, B1);
    const double rc = dist(p, C) / dist(p, C1);
    T6Evaluation ev;
    ev.lhs = ra * rb * rc;
    ev.rhs = (dist(A, B) * dist(B, C) * dist(C, A)) / (dist(A1, B) * dist(B1, C) * dist(C1, A));
    ev.relation_residuals = {
        detail::rel_ratio_residual(ra, (dist(B, C) / dist(B, A1)) * (dist(B1, A) / dist(B1, C))),
        detail::rel_ratio_residual(rb, (dist(C, A) / dist(C, B1)) * (dist(C1, B) / dist(C1, A))),
        detail::rel_ratio_residual(rc, (dist(A, B) / dist(A, C1)) * (dist(A1, C) / dist(A1, B))),
    };
    ev.residual = std::max({detail::rel_ratio_residual(ev.lhs, ev.rhs), ev.relation_residuals[0],
                            ev.relation_residuals[1], ev.relation_residuals[2]});
    return ev;
}

inline CheckReport check_t6(const Triangle& t, const Vec2& p, double tol = 1e-9) {
    const auto ev = evaluate_t6(t, p);
    auto rep = detail::single_report("t6", tol, ev.residual);
    rep.extras = {{"lhs", ev.lhs}, {"rhs", ev.rhs}, {"relation_residuals", ev.relation_residuals}};
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Orthic triangle inequality 4(a'b' + b'c' + c'a') <= a^2 + b^2 + c^2.

struct T7Evaluation {
    std::array<double, 3> orthic_sides{};  // a' = |B'C'|, b' = |C'A'|, c' = |A'B'|
    double expression = 0.0;               // a'b' + b'c' + c'a'
    double bound = 0.0;                    // a^2 + b^2 + c^2
    double deficit = 0.0;                  // bound - 4 expression
    double identity_residual = 0.0;        // expression vs x(a-x) + y(b-y) + z(c-z), normalized
    double residual = 0.0;
};

inline T7Evaluation evaluate_t7(const Triangle& t) {
    const auto feet = orthic_feet(t);
    const Vec2 &A1 = feet[0], &B1 = feet[1], &C1 = feet[2];
    T7Evaluation ev;
    const double ap = dist(B1, C1), bp = dist(C1, A1), cp = dist(A1, B1);
    ev.orthic_sides = {ap, bp, cp};
    ev.expression = ap * bp + bp * cp + cp * ap;
    ev.bound = t.sum_sq_sides();
    ev.deficit = ev.bound - 4.0 * ev.expression;
    const double a = t.side_a(), b = t.side_b(), c = t.side_c();
    const double x = dist(t.b(), A1), y = dist(t.c(), B1), z = dist(t.a(), C1);
    const double split = x * (a - x) + y * (b - y) + z * (c - z);
    ev.identity_residual = std::abs(split - ev.expression) / ev.bound;
    ev.residual = std::max(std::max(0.0, -ev.deficit) / ev.bound, ev.identity_residual);
    return ev;
}

inline CheckReport check_t7(const Triangle& t, double tol = 1e-9) {
    const auto ev = evaluate_t7(t);
    auto rep = detail::single_report("t7", tol, ev.residual);
    rep.extras = {{"expression", ev.expression},
                  {"bound", ev.bound},
                  {"deficit", ev.deficit},
                  {"identity_residual", ev.identity_residual}};
    return rep;
}

/// Deficits along C(s) = (1-s) C0 + s apex, s = 0 .. 1 in `steps` steps, with A = (0,0), B = (1,0)
/// and apex the equilateral third vertex.
inline std::vector<double> t7_homotopy_deficits(const Vec2& c0, int steps = 100) {
    std::vector<double> out;
    const Vec2 a{0.0, 0.0}, b{1.0, 0.0}, apex{0.5, std::sqrt(3.0) / 2.0};
    for (int i = 0; i <= steps; ++i) {
        const double s = static_cast<double>(i) / steps;
        out.push_back(evaluate_t7(Triangle(a, b, lerp(c0, apex, s))).deficit);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Pair vector-sum bound for points on a circle.

struct T8Evaluation {
    std::size_t i = 0, j = 0;       // sorted-gap pair (input indices)
    double theta_min = 0.0;         // radians
    double achieved_norm = 0.0;     // |OA_i + OA_j| for the gap pair
    double bound = 0.0;             // 2R cos(pi / n)
    std::size_t brute_i = 0, brute_j = 0;
    double brute_norm = 0.0;
    bool pair_mismatch = false;
    double residual = 0.0;
};

inline T8Evaluation evaluate_t8(const Circle& c, const std::vector<Vec2>& pts) {
    const std::size_t n = pts.size();
    require(n >= 2, ErrorCode::InvalidInput, "need at least two points");
    for (const auto& p : pts) require(on_ball(c, p), ErrorCode::InvalidInput, "point is not on the circle");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            require(dist(pts[i], pts[j]) > 1e-12 * c.radius, ErrorCode::InvalidInput, "points must be distinct");

    auto angle_of = [&](const Vec2& p) {
        const double a = std::atan2(p.y() - c.center.y(), p.x() - c.center.x());
        return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
    };
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<double> ang(n);
    for (std::size_t i = 0; i < n; ++i) ang[i] = angle_of(pts[i]);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ang[a] < ang[b]; });

    T8Evaluation ev;
    ev.theta_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t p = order[k], q = order[(k + 1) % n];
        double gap = ang[q] - ang[p];
        if (k + 1 == n) gap += 2.0 * std::numbers::pi;
        if (gap < ev.theta_min) {
            ev.theta_min = gap;
            ev.i = std::min(p, q);
            ev.j = std::max(p, q);
        }
    }
    ev.achieved_norm = norm((pts[ev.i] - c.center) + (pts[ev.j] - c.center));
    ev.bound = 2.0 * c.radius * std::cos(std::numbers::pi / static_cast<double>(n));

    ev.brute_norm = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = norm((pts[i] - c.center) + (pts[j] - c.center));
            if (v > ev.brute_norm) {
                ev.brute_norm = v;
                ev.brute_i = i;
                ev.brute_j = j;
            }
        }
    }
    const bool same_pair = ev.brute_i == ev.i && ev.brute_j == ev.j;
    ev.pair_mismatch = !same_pair && std::abs(ev.brute_norm - ev.achieved_norm) > 1e-12 * c.radius;
    ev.residual = std::max(0.0, ev.bound - ev.achieved_norm) / c.radius;
    if (ev.pair_mismatch) ev.residual = std::max(ev.residual, 1.0);
    return ev;
}

inline std::pair<T8Evaluation, CheckReport> check_t8(const Circle& c, const std::vector<Vec2>& pts,
                                                     double tol = 1e-9) {
    const auto ev = evaluate_t8(c, pts);
    auto rep = detail::single_report("t8", tol, ev.residual);
    rep.extras = {{"pair", {ev.i, ev.j}},
                  {"theta_min_deg", ev.theta_min * 180.0 / std::numbers::pi},
                  {"achieved_norm", ev.achieved_norm},
                  {"bound", ev.bound},
                  {"brute_force_norm", ev.brute_norm},
                  {"pair_mismatch", ev.pair_mismatch}};
    return {ev, rep};
}

// ---------------------------------------------------------------------------------------------
// Locus of the point dividing M1M2 in ratio k (circle through the intersection points).

struct LocusParameters {
    Vec2 center;   // O with |O1 O| = k |O O2|
    double radius; // |OA|
    Vec2 a, b;     // intersection points of the two circles
};

inline LocusParameters locus_parameters(const Circle& c1, const Circle& c2, Ratio k) {
    const auto [a, b] = circle_circle_intersection(c1, c2);
    const Vec2 o = divide_segment(c1.center, c2.center, k);
    return {o, dist(o, a), a, b};
}

/// Excluded-point neighborhood, relative to the locus radius.
inline constexpr double kLocusExclusion = 1e-6;
/// Second-intersection parameters below this (times radius) are treated as tangent directions.
inline constexpr double kTangentParamEps = 1e-9;

struct LocusSample {
    Vec2 m1, m2, m;
    bool from_a = true;
};

/// One forward sample: a random secant through A or B, resampled away from tangent and
/// radical-axis directions and from the excluded points.
inline LocusSample sample_locus_point(const Circle& c1, const Circle& c2, Ratio k, const LocusParameters& lp,
                                      TrialRng& rng) {
    for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
        const bool from_a = (rng.bits() & 1u) == 0u;
        const Vec2 through = from_a ? lp.a : lp.b;
        const Vec2 u = rng.unit2();
        const double t1 = second_intersection_parameter(c1, through, u);
        const double t2 = second_intersection_parameter(c2, through, u);
        if (std::abs(t1) < kTangentParamEps * c1.radius || std::abs(t2) < kTangentParamEps * c2.radius) continue;
        const Vec2 m1 = through + t1 * u, m2 = through + t2 * u;
        if (dist(m1, m2) < kLocusExclusion * lp.radius) continue;
        const Vec2 m = divide_segment(m1, m2, k);
        if (dist(m, lp.a) < kLocusExclusion * lp.radius || dist(m, lp.b) < kLocusExclusion * lp.radius) continue;
        return {m1, m2, m, from_a};
    }
    fail(ErrorCode::GenerationExhausted, "no admissible secant direction");
}

struct T9Sample {
    double forward_residual = 0.0;
    double converse_residual = 0.0;
    Vec2 forward_point;
};

inline T9Sample t9_sample(const Circle& c1, const Circle& c2, Ratio k, const LocusParameters& lp, TrialRng& rng) {
    T9Sample s;
    const auto fwd = sample_locus_point(c1, c2, k, lp, rng);
    s.forward_point = fwd.m;
    s.forward_residual = std::abs(dist(fwd.m, lp.center) - lp.radius) / lp.radius;

    for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
        const double phi = rng.angle();
        const Vec2 m = lp.center + lp.radius * Vec2{std::cos(phi), std::sin(phi)};
        if (dist(m, lp.a) < kLocusExclusion * lp.radius || dist(m, lp.b) < kLocusExclusion * lp.radius) continue;
        const Vec2 u = normalized(m - lp.a);
        const Vec2 m1 = lp.a + second_intersection_parameter(c1, lp.a, u) * u;
        const Vec2 m2 = lp.a + second_intersection_parameter(c2, lp.a, u) * u;
        const Vec2 expected = (m1 + k.value() * m2) / (1.0 + k.value());
        s.converse_residual = dist(expected, m) / lp.radius;
        return s;
    }
    fail(ErrorCode::GenerationExhausted, "no admissible converse sample");
}

inline std::pair<CheckReport, LocusParameters> check_t9(const Circle& c1, const Circle& c2, Ratio k,
                                                        std::uint64_t trials, double tol = 1e-10,
                                                        std::uint64_t seed = 0) {
    const auto lp = locus_parameters(c1, c2, k);
    std::vector<double> res(trials);
    double fmax = 0.0, cmax = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        TrialRng rng(seed, i, 9);
        const auto s = t9_sample(c1, c2, k, lp, rng);
        res[i] = std::max(s.forward_residual, s.converse_residual);
        fmax = std::max(fmax, s.forward_residual);
        cmax = std::max(cmax, s.converse_residual);
    }
    auto rep = aggregate_residuals("t9", seed, tol, res);
    rep.extras = {{"locus_center", {lp.center.x(), lp.center.y()}},
                  {"locus_radius", lp.radius},
                  {"forward_max_residual", fmax},
                  {"converse_max_residual", cmax},
                  {"k", k.value()}};
    return {rep, lp};
}

// ---------------------------------------------------------------------------------------------
// Batch verification over generated scenes.

inline constexpr std::array<std::string_view, 9> kTheoremIds{"t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8", "t9"};

inline bool is_theorem_id(std::string_view id) {
    return std::find(kTheoremIds.begin(), kTheoremIds.end(), id) != kTheoremIds.end();
}

struct VerifyOptions {
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    unsigned threads = 1;
    std::optional<double> k;  // t4 fraction / t9 ratio; random per trial when unset (t4) or 1 (t9)
};

struct TrialOutcome {
    double residual = 0.0;
    std::vector<double> stats;
};

namespace detail {

inline constexpr std::uint32_t kParamStream = 1000;

/// Polygon size for a t1 trial, drawn from its own stream so the scene stays a pure function of (seed, index).
inline std::size_t t1_polygon_size(std::uint64_t seed, std::uint64_t index) {
    TrialRng rng(seed, index, kParamStream + 1);
    return static_cast<std::size_t>(rng.integer(3, 12));
}

inline std::size_t t8_point_count(std::uint64_t seed, std::uint64_t index) {
    TrialRng rng(seed, index, kParamStream + 8);
    return static_cast<std::size_t>(rng.integer(2, 50));
}

}  // namespace detail

/// The scene used by trial `index` of theorem `id`.
inline Scene theorem_scene(std::string_view id, std::uint64_t seed, std::uint64_t index) {
    if (id == "t1") return sample_scene(SceneKind::Polygon, {detail::t1_polygon_size(seed, index)}, seed, index);
    if (id == "t2") return sample_scene(SceneKind::PointsOnCircle, {8}, seed, index);
    if (id == "t3" || id == "t4" || id == "t5" || id == "t6") return sample_scene(SceneKind::Triangle, {}, seed, index);
    if (id == "t7") return sample_scene(SceneKind::AcuteTriangle, {}, seed, index);
    if (id == "t8") return sample_scene(SceneKind::PointsOnCircle, {detail::t8_point_count(seed, index)}, seed, index);
    if (id == "t9") return sample_scene(SceneKind::CirclePair, {}, seed, index);
    fail(ErrorCode::InvalidInput, "unknown theorem id " + std::string(id));
}

/// Secants through consecutive point pairs of a points-on-circle scene.
inline std::vector<Line2> t2_secants(const Scene& s) {
    std::vector<Line2> out;
    for (std::size_t i = 0; i + 1 < s.points.size(); i += 2) out.push_back(Line2::through(s.points[i], s.points[i + 1]));
    return out;
}

/// Evaluates trial `index` of theorem `id` on `scene`.
inline TrialOutcome theorem_trial(std::string_view id, const Scene& scene, const VerifyOptions& opt) {
    TrialOutcome out;
    if (id == "t1") {
        const Polygon poly = scene.polygon();
        out.residual = std::max(projection_identity_residual(poly.vertices(), scene.probes[0]),
                                projection_identity_residual(poly.vertices(), scene.probes[1]));
    } else if (id == "t2") {
        const auto rep = check_t2_tangent_polygon(scene.circles[0], t2_secants(scene));
        out.residual = std::max(rep.max_pole_residual, rep.max_polar_residual);
        out.stats = {rep.polygon_formed ? 1.0 : 0.0};
    } else if (id == "t3") {
        const auto ev = evaluate_t3(scene.triangle(), scene.probes[0]);
        const auto at_centroid = evaluate_t3(scene.triangle(), scene.triangle().centroid());
        out.residual = std::max({ev.residual, std::abs(at_centroid.ratios.E - 6.0) / 6.0,
                                 std::abs(at_centroid.ratios.F - 8.0) / 8.0});
        out.stats = {ev.ratios.E, ev.ratios.F, std::abs(at_centroid.ratios.E - 6.0),
                     std::abs(at_centroid.ratios.F - 8.0)};
    } else if (id == "t4") {
        double k = 0.0;
        if (opt.k) {
            k = *opt.k;
        } else {
            TrialRng rng(scene.seed, scene.index, detail::kParamStream + 4);
            k = rng.uniform(1e-3, 1.0 - 1e-3);
        }
        const auto ev = evaluate_t4(scene.triangle(), k);
        out.residual = ev.residual;
    } else if (id == "t5") {
        const Triangle t = scene.triangle();
        TrialRng rng(scene.seed, scene.index, detail::kParamStream + 5);
        const bool positive = scene.index % 2 == 0;
        std::optional<std::array<Vec2, 3>> feet;
        for (int attempt = 0; attempt < kMaxSceneAttempts && !feet; ++attempt) {
            if (positive) {
                feet = construct_concurrent_feet(t, rng.uniform(0.05, 0.95));
            } else {
                const double u = rng.uniform(0.05, 0.95), v = rng.uniform(0.05, 0.95);
                if (std::abs(detail::t5_mismatch(t, u, v)) > 1e-6 * t.side_c()) feet = construct_condition_feet(t, u, v);
            }
        }
        require(feet.has_value(), ErrorCode::GenerationExhausted, "could not construct cevian feet");
        const auto w = evaluate_t5(t, *feet, opt.tol);
        out.residual = std::max(w.condition_residual, t5_equivalence_residual(w));
        out.stats = {positive ? 1.0 : 0.0, w.concurrent == Holds::Yes ? 1.0 : 0.0};
    } else if (id == "t6") {
        out.residual = evaluate_t6(scene.triangle(), scene.probes[0]).residual;
    } else if (id == "t7") {
        const auto ev = evaluate_t7(scene.triangle());
        out.residual = ev.residual;
        out.stats = {ev.deficit / ev.bound};
    } else if (id == "t8") {
        const auto ev = evaluate_t8(scene.circles[0], scene.points);
        out.residual = ev.residual;
        out.stats = {ev.pair_mismatch ? 1.0 : 0.0};
    } else if (id == "t9") {
        const Ratio k(opt.k.value_or(1.0));
        const Circle &c1 = scene.circles[0], &c2 = scene.circles[1];
        const auto lp = locus_parameters(c1, c2, k);
        TrialRng rng(scene.seed, scene.index, 9);
        const auto s = t9_sample(c1, c2, k, lp, rng);
        out.residual = std::max(s.forward_residual, s.converse_residual);
        out.stats = {s.forward_residual, s.converse_residual};
    } else {
        fail(ErrorCode::InvalidInput, "unknown theorem id " + std::string(id));
    }
    return out;
}

inline Json theorem_extras(std::string_view id, const std::vector<TrialOutcome>& outcomes) {
    Json ex = Json::object();
    auto column_max = [&](std::size_t c) {
        double m = 0.0;
        for (const auto& o : outcomes) m = std::max(m, o.stats.at(c));
        return m;
    };
    auto column_min = [&](std::size_t c) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& o : outcomes) m = std::min(m, o.stats.at(c));
        return m;
    };
    auto column_sum = [&](std::size_t c) {
        double s = 0.0;
        for (const auto& o : outcomes) s += o.stats.at(c);
        return s;
    };
    if (outcomes.empty()) return ex;
    if (id == "t2") {
        ex["polygons_formed"] = column_sum(0);
    } else if (id == "t3") {
        ex["min_E"] = column_min(0);
        ex["min_F"] = column_min(1);
        ex["max_centroid_E_error"] = column_max(2);
        ex["max_centroid_F_error"] = column_max(3);
    } else if (id == "t5") {
        ex["constructed_concurrent"] = column_sum(0);
        ex["observed_concurrent"] = column_sum(1);
    } else if (id == "t7") {
        ex["min_relative_deficit"] = column_min(0);
    } else if (id == "t8") {
        ex["pair_mismatches"] = column_sum(0);
    } else if (id == "t9") {
        ex["forward_max_residual"] = column_max(0);
        ex["converse_max_residual"] = column_max(1);
    }
    return ex;
}

namespace detail {

inline CheckReport run_trials(std::string_view id, const VerifyOptions& opt, const std::vector<std::uint64_t>& indices) {
    const auto start = std::chrono::steady_clock::now();
    const auto outcomes = parallel_map<TrialOutcome>(indices.size(), opt.threads, [&](std::size_t i) {
        return theorem_trial(id, theorem_scene(id, opt.seed, indices[i]), opt);
    });
    std::vector<double> residuals;
    residuals.reserve(outcomes.size());
    for (const auto& o : outcomes) residuals.push_back(o.residual);
    auto rep = aggregate_residuals(std::string(id), opt.seed, opt.tol, residuals,
                                   [&](std::uint64_t i) { return theorem_scene(id, opt.seed, indices[i]); });
    for (auto& f : rep.failures) f.trial_index = indices[f.trial_index];
    rep.extras = theorem_extras(id, outcomes);
    if (opt.k) rep.extras["k"] = *opt.k;
    rep.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace detail

/// Runs theorem `id` over trials 0 .. opt.trials-1 with scenes derived from (opt.seed, index).
inline CheckReport verify(std::string_view id, const VerifyOptions& opt) {
    require(is_theorem_id(id), ErrorCode::InvalidInput, "unknown theorem id " + std::string(id));
    std::vector<std::uint64_t> indices(opt.trials);
    for (std::uint64_t i = 0; i < opt.trials; ++i) indices[i] = i;
    return detail::run_trials(id, opt, indices);
}

/// Re-runs the single trial (seed, index) exactly as verify() would.
inline CheckReport replay(std::string_view id, const VerifyOptions& opt, std::uint64_t index) {
    require(is_theorem_id(id), ErrorCode::InvalidInput, "unknown theorem id " + std::string(id));
    auto rep = detail::run_trials(id, opt, {index});
    rep.extras["replay_index"] = index;
    return rep;
}

}  // namespace geoprobe
