#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <geoprobe/theorems.hpp>

using namespace geoprobe;

namespace {

const double kSqrt3 = std::sqrt(3.0);

Triangle equilateral(double side) { return Triangle({0.0, 0.0}, {side, 0.0}, {side / 2.0, side * kSqrt3 / 2.0}); }

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected a geoprobe::Error";
    return ErrorCode::InvalidInput;
}

VerifyOptions options(std::uint64_t trials, std::uint64_t seed, double tol = 1e-9) {
    VerifyOptions o;
    o.trials = trials;
    o.seed = seed;
    o.tol = tol;
    o.threads = default_thread_count();
    return o;
}

}  // namespace

// --- t1 ---------------------------------------------------------------------------------------

TEST(T1, UnitSquareCenter) {
    const Polygon sq({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
    const auto rep = check_t1(sq, {0.5, 0.5});
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.max_residual, 0.0);
}

TEST(T1, ProbeAtVertex) {
    const Polygon p({{0.0, 0.0}, {3.0, 0.5}, {2.0, 2.0}, {-1.0, 1.5}});
    for (std::size_t j = 0; j < p.size(); ++j) EXPECT_LT(check_t1(p, p[j]).max_residual, 1e-12);
}

TEST(T1, RandomHeptagonInsideAndOutside) {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const Scene s = sample_scene(SceneKind::Polygon, {7}, 21, i);
        const Polygon p = s.polygon();
        // oracle: both sums evaluated directly from feet of perpendiculars
        for (const Vec2& m : s.probes) {
            double lhs = 0.0, rhs = 0.0, sides = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k) {
                const Vec2 a = p[k], b = p[k + 1];
                const Vec2 d = b - a;
                const Vec2 foot = a + (dot(m - a, d) / dot(d, d)) * d;
                lhs += dist_sq(foot, a);
                rhs += dist_sq(foot, b);
                sides += dist_sq(a, b);
            }
            EXPECT_LT(std::abs(lhs - rhs) / sides, 1e-10);
            EXPECT_LT(check_t1(p, m).max_residual, 1e-10);
        }
    }
}

TEST(T1, SelfIntersectingCycle) {
    const std::vector<Vec2> bowtie{{0.0, 0.0}, {2.0, 2.0}, {2.0, 0.0}, {0.0, 2.0}};
    EXPECT_LT(projection_identity_residual(bowtie, Vec2{0.3, -4.0}), 1e-12);
}

TEST(T1, HundredThousandScenes) {
    const auto rep = verify("t1", options(100000, 1, 1e-10));
    EXPECT_TRUE(rep.pass) << rep.max_residual;
}

// --- t2 ---------------------------------------------------------------------------------------

TEST(T2, InscribedEquilateralGivesTangentialTriangle) {
    const Circle unit({0.0, 0.0}, 1.0);
    std::vector<Vec2> v;
    for (int i = 0; i < 3; ++i) {
        const double a = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * i / 3.0;
        v.push_back({std::cos(a), std::sin(a)});
    }
    const auto rep = check_t2_tangent_polygon(
        unit, {Line2::through(v[0], v[1]), Line2::through(v[1], v[2]), Line2::through(v[2], v[0])});
    ASSERT_TRUE(rep.polygon_formed);
    ASSERT_EQ(rep.polygon.size(), 3u);
    EXPECT_EQ(rep.tangency_points.size(), 3u);
    for (const auto& p : rep.polygon) EXPECT_NEAR(norm(p), 2.0, 1e-12);
    // circumscribed triangle sides are twice the inscribed ones
    EXPECT_NEAR(dist(rep.polygon[0], rep.polygon[1]), 2.0 * kSqrt3, 1e-12);
    EXPECT_EQ(rep.intersections.size(), 3u);
}

TEST(T2, DiameterGivesParallelTangents) {
    const auto rep = check_t2_tangent_polygon(Circle({0.0, 0.0}, 1.0), {Line2{{0.0, 0.0}, {1.0, 0.0}}});
    ASSERT_EQ(rep.poles.size(), 1u);
    EXPECT_FALSE(rep.poles[0].has_value());
    EXPECT_TRUE(rep.intersections.empty());
    EXPECT_FALSE(rep.polygon_formed);
}

TEST(T2, TangentOrMissingSecantRejected) {
    const Circle unit({0.0, 0.0}, 1.0);
    EXPECT_EQ(code_of([&] { check_t2_tangent_polygon(unit, {Line2{{0.0, 1.0}, {1.0, 0.0}}}); }),
              ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([&] { check_t2_tangent_polygon(unit, {Line2{{0.0, 3.0}, {1.0, 0.0}}}); }),
              ErrorCode::InvalidInput);
}

TEST(T2, PolePolarIncidenceOnRandomSecants) {
    TrialRng rng(31, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const Circle c(rng.in_box(-2.0, 2.0), rng.uniform(0.5, 3.0));
        std::vector<Line2> secants;
        for (int j = 0; j < 4; ++j) {
            const Vec2 p = c.center + c.radius * rng.unit2();
            Vec2 q = c.center + c.radius * rng.unit2();
            while (dist(p, q) < 0.1 * c.radius || dist(p, 2.0 * c.center - q) < 0.05 * c.radius)
                q = c.center + c.radius * rng.unit2();
            secants.push_back(Line2::through(p, q));
        }
        const auto rep = check_t2_tangent_polygon(c, secants);
        EXPECT_LT(rep.max_polar_residual, 1e-10);
        EXPECT_LT(rep.max_pole_residual, 1e-10);
        // independent pole: tangents at p, q meet at center + r^2 (m - center)/|m - center|^2, m the chord midpoint
        for (std::size_t j = 0; j < secants.size(); ++j) {
            ASSERT_TRUE(rep.poles[j].has_value());
            const auto [p, q] = circle_line_intersections(c, secants[j]);
            EXPECT_LT(std::abs(dist(*rep.poles[j], p) - dist(*rep.poles[j], q)), 1e-9 * std::max(1.0, norm(*rep.poles[j])));
        }
    }
}

// --- t3 ---------------------------------------------------------------------------------------

TEST(T3, CentroidGivesSixAndEight) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const Triangle t = sample_scene(SceneKind::Triangle, {}, 41, i).triangle();
        const auto [r, rep] = check_t3(t, t.centroid());
        for (double v : r.vertex_ratios) EXPECT_NEAR(v, 2.0, 1e-12);
        EXPECT_NEAR(r.E, 6.0, 1e-12);
        EXPECT_NEAR(r.F, 8.0, 1e-12);
        EXPECT_TRUE(rep.pass);
    }
}

TEST(T3, BoundsOnRandomInteriorPoints) {
    const auto rep = verify("t3", options(100000, 42));
    EXPECT_TRUE(rep.pass) << rep.max_residual;
    EXPECT_GE(rep.extras["min_E"].get<double>(), 6.0 - 1e-9);
    EXPECT_GE(rep.extras["min_F"].get<double>(), 8.0 - 1e-9);
}

TEST(T3, VanAubelAgainstBarycentricOracle) {
    // P with barycentric weights (wa, wb, wc) has |PA|/|PA'| = (wb + wc)/wa
    TrialRng rng(43, 0);
    for (int i = 0; i < 10000; ++i) {
        const Triangle t = sample_scene(SceneKind::Triangle, {}, 43, static_cast<std::uint64_t>(i)).triangle();
        const double wa = rng.uniform(0.01, 1.0), wb = rng.uniform(0.01, 1.0), wc = rng.uniform(0.01, 1.0);
        const double s = wa + wb + wc;
        const Vec2 p = t.from_barycentric(wa / s, wb / s, wc / s);
        const auto ev = evaluate_t3(t, p);
        EXPECT_NEAR(ev.ratios.vertex_ratios[0], (wb + wc) / wa, 1e-9 * (wb + wc) / wa);
        EXPECT_NEAR(ev.ratios.vertex_ratios[1], (wa + wc) / wb, 1e-9 * (wa + wc) / wb);
        EXPECT_NEAR(ev.ratios.vertex_ratios[2], (wa + wb) / wc, 1e-9 * (wa + wb) / wc);
        EXPECT_LT(ev.van_aubel_residual, 1e-9);
    }
}

TEST(T3, NearVertexDiverges) {
    const Triangle t({0.0, 0.0}, {4.0, 0.0}, {1.0, 3.0});
    const Vec2 p = t.from_barycentric(0.999, 0.0005, 0.0005);
    const auto [r, rep] = check_t3(t, p);
    EXPECT_GT(r.E, 1e3);
    EXPECT_TRUE(rep.pass);
}

TEST(T3, BoundaryPointRejected) {
    const Triangle t({0.0, 0.0}, {4.0, 0.0}, {1.0, 3.0});
    EXPECT_EQ(code_of([&] { check_t3(t, {2.0, 0.0}); }), ErrorCode::Domain);
    EXPECT_EQ(code_of([&] { check_t3(t, {9.0, 9.0}); }), ErrorCode::Domain);
}

TEST(T3, MinimizerConvergesToCentroid) {
    for (std::uint64_t i = 0; i < 20; ++i) {
        const Scene s = sample_scene(SceneKind::Triangle, {}, 44, i);
        const Triangle t = s.triangle();
        const auto res = minimize_cevian_sum(t, s.probes[0]);
        EXPECT_LT(dist(Vec2{res.x[0], res.x[1]}, t.centroid()), 1e-6 * t.diameter());
        EXPECT_NEAR(res.value, 6.0, 1e-9);
    }
}

// --- t4 ---------------------------------------------------------------------------------------

TEST(T4, RightTriangleWorkedInstance) {
    const Triangle t({0.0, 3.0}, {0.0, 0.0}, {4.0, 0.0});
    // oracle: each median from vertex to side midpoint
    const Vec2 A{0.0, 3.0}, B{0.0, 0.0}, C{4.0, 0.0};
    const double ma = dist_sq(A, 0.5 * (B + C)), mb = dist_sq(B, 0.5 * (C + A)), mc = dist_sq(C, 0.5 * (A + B));
    EXPECT_NEAR(ma, 13.0, 1e-12);
    EXPECT_NEAR(mb, 6.25, 1e-12);
    EXPECT_NEAR(mc, 18.25, 1e-12);
    const auto ev = evaluate_t4(t, 0.5);
    EXPECT_NEAR(ev.direct_sum, 37.5, 1e-9);
    EXPECT_NEAR(ev.direct_sum, ma + mb + mc, 1e-12);
    EXPECT_NEAR(ev.formula, 0.75 * (9.0 + 16.0 + 25.0), 1e-12);
}

TEST(T4, EquilateralHalf) { EXPECT_NEAR(evaluate_t4(equilateral(1.0), 0.5).direct_sum, 2.25, 1e-12); }

TEST(T4, SweepFindsHalfAndIdentityHolds) {
    for (std::uint64_t i = 0; i < 50; ++i) {
        const Triangle t = sample_scene(SceneKind::Triangle, {}, 45, i).triangle();
        const auto [rep, sw] = check_t4(t, 0.3);
        EXPECT_TRUE(rep.pass) << rep.max_residual;
        EXPECT_NEAR(sw.argmin, 0.5, 1e-6);
        EXPECT_NEAR(sw.min_ratio, 0.75, 1e-9);
        EXPECT_LT(sw.identity_residual, 1e-10);
        EXPECT_LT(sw.quadratic_fit_residual, 1e-10);
        EXPECT_EQ(sw.samples, 981u);
    }
}

TEST(T4, FractionOutsideUnitIntervalRejected) {
    EXPECT_EQ(code_of([] { evaluate_t4(equilateral(1.0), 0.0); }), ErrorCode::Domain);
    EXPECT_EQ(code_of([] { evaluate_t4(equilateral(1.0), 1.5); }), ErrorCode::Domain);
}

TEST(T4, QuadraticHasPositiveLeadingCoefficient) {
    const Triangle t({0.3, 0.1}, {5.0, -1.0}, {2.0, 4.0});
    const double s0 = same_ratio_cevian_sum(t, 0.0), s1 = same_ratio_cevian_sum(t, 0.5),
                 s2 = same_ratio_cevian_sum(t, 1.0);
    EXPECT_GT(s0 + s2 - 2.0 * s1, 0.0);
}

// --- t5 ---------------------------------------------------------------------------------------

TEST(T5, MediansSatisfyConditionAndConcur) {
    const Triangle t({0.0, 0.0}, {5.0, 0.0}, {1.0, 3.0});
    const auto [w, rep] = check_t5(t, {0.5 * (t.b() + t.c()), 0.5 * (t.c() + t.a()), 0.5 * (t.a() + t.b())});
    EXPECT_LT(std::abs(w.alpha) + std::abs(w.beta) + std::abs(w.gamma), 1e-12);
    const double abc = t.side_a() * t.side_b() * t.side_c();
    EXPECT_NEAR(w.product_lhs / (abc * abc), 1.0, 1e-12);
    EXPECT_NEAR(w.product_rhs / (abc * abc), 1.0, 1e-12);
    EXPECT_EQ(w.concurrent, Holds::Yes);
    EXPECT_TRUE(rep.pass);
}

TEST(T5, AltitudeFeetSatisfyConditionAndConcur) {
    const Triangle t({0.0, 0.0}, {4.0, 0.0}, {1.8, 3.0});
    const auto [w, rep] = check_t5(t, orthic_feet(t));
    EXPECT_LT(w.condition_residual, 1e-9);
    EXPECT_EQ(w.squared_leg_condition, Holds::Yes);
    EXPECT_LT(w.spread_relative, 1e-9);
    EXPECT_NEAR(w.ceva_product, 1.0, 1e-12);
    EXPECT_TRUE(rep.pass);
}

TEST(T5, CorrectedRatioFormHolds) {
    // (a^2 + alpha)/(a^2 - alpha) = |A1B|/|A1C| for any A1 on BC
    const Triangle t({0.0, 0.0}, {4.0, 0.0}, {1.8, 3.0});
    for (double u : {0.1, 0.37, 0.5, 0.81}) {
        const Vec2 a1 = lerp(t.b(), t.c(), u);
        const double a = t.side_a();
        const double alpha = a * (dist(a1, t.b()) - dist(a1, t.c()));
        EXPECT_NEAR((a * a + alpha) / (a * a - alpha), dist(a1, t.b()) / dist(a1, t.c()), 1e-12);
    }
}

TEST(T5, FootAtVertexRejected) {
    const Triangle t({0.0, 0.0}, {4.0, 0.0}, {1.8, 3.0});
    EXPECT_EQ(code_of([&] { check_t5(t, {t.b(), 0.5 * (t.c() + t.a()), 0.5 * (t.a() + t.b())}); }), ErrorCode::Domain);
}

TEST(T5, ConstructedCasesAgreeWithGeometricConcurrency) {
    int positives = 0, negatives = 0;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const Triangle t = sample_scene(SceneKind::Triangle, {}, 51, i).triangle();
        TrialRng rng(51, i, 5);
        const auto pos = construct_concurrent_feet(t, rng.uniform(0.05, 0.95));
        if (pos) {
            const auto w = evaluate_t5(t, *pos);
            EXPECT_EQ(w.squared_leg_condition, Holds::Yes);
            EXPECT_EQ(w.concurrent, Holds::Yes);
            EXPECT_EQ(w.product_condition, Holds::Yes);
            ++positives;
        }
        const double u = rng.uniform(0.05, 0.95), v = rng.uniform(0.05, 0.95);
        if (std::abs(detail::t5_mismatch(t, u, v)) > 1e-6 * t.side_c()) {
            if (const auto neg = construct_condition_feet(t, u, v)) {
                const auto w = evaluate_t5(t, *neg);
                EXPECT_EQ(w.squared_leg_condition, Holds::Yes);
                EXPECT_EQ(w.concurrent, Holds::No);
                EXPECT_EQ(w.product_condition, Holds::No);
                ++negatives;
            }
        }
    }
    EXPECT_GT(positives, 500);
    EXPECT_GT(negatives, 500);
    const auto rep = verify("t5", options(2000, 52));
    EXPECT_TRUE(rep.pass) << rep.max_residual;
}

// --- t6 ---------------------------------------------------------------------------------------

TEST(T6, CentroidEightVersusEight) {
    const Triangle t({0.0, 0.0}, {5.0, 1.0}, {1.0, 3.0});
    const auto ev = evaluate_t6(t, t.centroid());
    EXPECT_NEAR(ev.lhs, 8.0, 1e-12);
    EXPECT_NEAR(ev.rhs, 8.0, 1e-12);
}

TEST(T6, IncenterOfThreeFourFive) {
    const Vec2 A{0.0, 3.0}, B{0.0, 0.0}, C{4.0, 0.0};
    const double a = dist(B, C), b = dist(C, A), c = dist(A, B);
    const Vec2 incenter = (a * A + b * B + c * C) / (a + b + c);
    const Triangle t(A, B, C);
    // oracle: feet by the angle-bisector theorem, lhs from vertex distances
    const Vec2 A1 = lerp(B, C, c / (b + c)), B1 = lerp(C, A, a / (a + c)), C1 = lerp(A, B, b / (a + b));
    const double lhs = dist(incenter, A) / dist(incenter, A1) * dist(incenter, B) / dist(incenter, B1) *
                       dist(incenter, C) / dist(incenter, C1);
    const double rhs = (c * a * b) / (dist(A1, B) * dist(B1, C) * dist(C1, A));
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-10);
    const auto ev = evaluate_t6(t, incenter);
    EXPECT_NEAR(ev.lhs, lhs, 1e-10 * lhs);
    EXPECT_LT(ev.residual, 1e-10);
}

TEST(T6, RandomInteriorPoints) {
    const auto rep = verify("t6", options(100000, 61));
    EXPECT_TRUE(rep.pass) << rep.max_residual;
    const Triangle t({0.0, 0.0}, {5.0, 1.0}, {1.0, 3.0});
    const auto ev = evaluate_t6(t, {2.0, 1.2});
    for (double r : ev.relation_residuals) EXPECT_LT(r, 1e-12);
}

// --- t7 ---------------------------------------------------------------------------------------

TEST(T7, EquilateralEquality) {
    const auto ev = evaluate_t7(equilateral(2.0));
    for (double s : ev.orthic_sides) EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_NEAR(ev.expression, 3.0, 1e-12);
    EXPECT_NEAR(ev.bound / 4.0, 3.0, 1e-12);
    EXPECT_LT(std::abs(ev.deficit), 1e-10);
}

TEST(T7, ScaleneStrictDeficit) {
    const Triangle t({0.0, 0.0}, {4.0, 0.0}, {1.8, 3.0});
    const auto ev = evaluate_t7(t);
    // oracle: the orthic side opposite A' is a cos A, and so on
    const auto ang = t.angles();
    const double ap = t.side_a() * std::cos(ang[0]), bp = t.side_b() * std::cos(ang[1]),
                 cp = t.side_c() * std::cos(ang[2]);
    const double expected = t.sum_sq_sides() - 4.0 * (ap * bp + bp * cp + cp * ap);
    EXPECT_NEAR(ev.deficit, expected, 1e-10);
    EXPECT_GT(ev.deficit, 0.1);
    EXPECT_LT(ev.identity_residual, 1e-12);
    // deficit = 4 sum (x - a/2)^2 with x = |BA'|, y = |CB'|, z = |AC'|
    const auto f = orthic_feet(t);
    const double x = dist(t.b(), f[0]), y = dist(t.c(), f[1]), z = dist(t.a(), f[2]);
    const double sq = 4.0 * (std::pow(x - t.side_a() / 2, 2) + std::pow(y - t.side_b() / 2, 2) +
                             std::pow(z - t.side_c() / 2, 2));
    EXPECT_NEAR(ev.deficit, sq, 1e-10);
}

TEST(T7, DomainBoundary) {
    const double near = 89.0 * std::numbers::pi / 180.0;
    const Triangle t89({0.0, 0.0}, {1.0, 0.0}, {std::cos(near), std::sin(near)});  // apex angle at A is 89 degrees
    EXPECT_TRUE(check_t7(t89).pass);
    EXPECT_EQ(code_of([] { check_t7(Triangle({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0})); }), ErrorCode::Domain);
}

TEST(T7, HomotopyDecreasesToZero) {
    const auto d = t7_homotopy_deficits({0.3, 0.7});
    ASSERT_EQ(d.size(), 101u);
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_LT(d[i], d[i - 1]) << "step " << i;
    EXPECT_LT(std::abs(d.back()), 1e-10);
}

TEST(T7, RandomAcuteTriangles) {
    const auto rep = verify("t7", options(100000, 71));
    EXPECT_TRUE(rep.pass) << rep.max_residual;
    EXPECT_GE(rep.extras["min_relative_deficit"].get<double>(), -1e-9);
}

// --- t8 ---------------------------------------------------------------------------------------

TEST(T8, RegularPolygonsAreSharp) {
    for (int n = 3; n <= 12; ++n) {
        const Circle c({0.3, -0.2}, 1.7);
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) {
            const double a = 0.1 + 2.0 * std::numbers::pi * i / n;
            pts.push_back(c.center + c.radius * Vec2{std::cos(a), std::sin(a)});
        }
        const auto [ev, rep] = check_t8(c, pts);
        EXPECT_NEAR(ev.achieved_norm, ev.bound, 1e-9);
        EXPECT_NEAR(ev.brute_norm, ev.bound, 1e-9);
        EXPECT_TRUE(rep.pass);
    }
}

TEST(T8, SquareAndTriangle) {
    const Circle unit({0.0, 0.0}, 1.0);
    const auto [sq, r1] = check_t8(unit, {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}});
    EXPECT_NEAR(sq.achieved_norm, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(sq.bound, 2.0 * std::cos(std::numbers::pi / 4.0), 1e-15);
    const auto [tri, r2] = check_t8(unit, {{1.0, 0.0}, {-0.5, kSqrt3 / 2.0}, {-0.5, -kSqrt3 / 2.0}});
    EXPECT_NEAR(tri.achieved_norm, 1.0, 1e-12);
    EXPECT_TRUE(r1.pass);
    EXPECT_TRUE(r2.pass);
}

TEST(T8, TwoPointsBoundIsZero) {
    const auto [ev, rep] = check_t8(Circle({0.0, 0.0}, 1.0), {{1.0, 0.0}, {-1.0, 0.0}});
    EXPECT_NEAR(ev.bound, 0.0, 1e-15);
    EXPECT_TRUE(rep.pass);
}

TEST(T8, InvalidInputs) {
    const Circle unit({0.0, 0.0}, 1.0);
    EXPECT_EQ(code_of([&] { check_t8(unit, {{1.0, 0.0}}); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([&] { check_t8(unit, {{1.0, 0.0}, {0.5, 0.0}}); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([&] { check_t8(unit, {{1.0, 0.0}, {1.0, 0.0}}); }), ErrorCode::InvalidInput);
}

TEST(T8, RandomConfigurationsMatchBruteForce) {
    const auto rep = verify("t8", options(100000, 81));
    EXPECT_TRUE(rep.pass) << rep.max_residual;
    EXPECT_EQ(rep.extras["pair_mismatches"].get<double>(), 0.0);
}

// --- t9 ---------------------------------------------------------------------------------------

TEST(T9, UnitCirclesLocusParameters) {
    const auto lp = locus_parameters(Circle({0.0, 0.0}, 1.0), Circle({1.0, 0.0}, 1.0), Ratio(1.0));
    EXPECT_NEAR(lp.center.x(), 0.5, 1e-15);
    EXPECT_NEAR(lp.center.y(), 0.0, 1e-15);
    EXPECT_NEAR(lp.radius, kSqrt3 / 2.0, 1e-15);
}

TEST(T9, WorkedChain) {
    const Circle c1({0.0, 0.0}, 1.0), c2({1.0, 0.0}, 1.0);
    const Vec2 a{0.5, kSqrt3 / 2.0}, u{std::sqrt(0.5), std::sqrt(0.5)};
    const Vec2 m1 = circle_line_second_intersection(c1, a, u);
    const Vec2 m2 = circle_line_second_intersection(c2, a, u);
    const Vec2 m = divide_segment(m1, m2, Ratio(1.0));
    EXPECT_NEAR(m.x(), -0.3660254037844386, 1e-12);
    EXPECT_NEAR(m.y(), 0.0, 1e-12);
    EXPECT_NEAR(dist(m, {0.5, 0.0}), kSqrt3 / 2.0, 1e-12);
}

TEST(T9, ForwardAndConverseForSeveralRatios) {
    const Circle c1({0.0, 0.0}, 1.0), c2({1.0, 0.0}, 1.0);
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const auto [rep, lp] = check_t9(c1, c2, Ratio(k), 20000, 1e-10, 91);
        EXPECT_TRUE(rep.pass) << "k=" << k << " " << rep.max_residual;
        EXPECT_LT(dist(lp.center, divide_segment(c1.center, c2.center, Ratio(k))), 1e-15);
        // |O1 O| = k |O O2|
        EXPECT_NEAR(dist(c1.center, lp.center), k * dist(lp.center, c2.center), 1e-12);
    }
}

TEST(T9, ExcludedPointsNeverSampled) {
    const Circle c1({0.0, 0.0}, 1.0), c2({1.2, 0.3}, 0.8);
    const auto lp = locus_parameters(c1, c2, Ratio(2.0));
    for (std::uint64_t i = 0; i < 20000; ++i) {
        TrialRng rng(92, i, 9);
        const auto s = sample_locus_point(c1, c2, Ratio(2.0), lp, rng);
        EXPECT_GE(dist(s.m, lp.a), kLocusExclusion * lp.radius);
        EXPECT_GE(dist(s.m, lp.b), kLocusExclusion * lp.radius);
    }
}

TEST(T9, DisjointCirclesRejected) {
    EXPECT_EQ(code_of([] { check_t9(Circle({0.0, 0.0}, 1.0), Circle({3.0, 0.0}, 1.0), Ratio(1.0), 1); }),
              ErrorCode::NoIntersection);
}

TEST(T9, RandomCirclePairs) {
    auto opt = options(20000, 93, 1e-10);
    opt.k = 2.0;
    const auto rep = verify("t9", opt);
    EXPECT_TRUE(rep.pass) << rep.max_residual;
}

// --- batch driver -----------------------------------------------------------------------------

TEST(Verify, ReportInvariants) {
    for (auto id : kTheoremIds) {
        const auto rep = verify(id, options(200, 7));
        EXPECT_EQ(rep.trials, 200u) << id;
        EXPECT_GE(rep.max_residual, rep.mean_residual) << id;
        EXPECT_GE(rep.mean_residual, 0.0) << id;
        EXPECT_EQ(rep.pass, rep.failures.empty()) << id;
        EXPECT_TRUE(rep.pass) << id << " " << rep.max_residual;
    }
}

TEST(Verify, ThreadCountDoesNotChangeResults) {
    auto o1 = options(3000, 8);
    o1.threads = 1;
    auto o4 = o1;
    o4.threads = 4;
    for (auto id : {"t1", "t3", "t8"}) {
        const auto a = verify(id, o1), b = verify(id, o4);
        EXPECT_EQ(a.max_residual, b.max_residual);
        EXPECT_EQ(a.mean_residual, b.mean_residual);
        EXPECT_EQ(a.extras, b.extras);
    }
}

TEST(Verify, FailuresAreSortedCappedAndReplayable) {
    const auto rep = verify("t1", options(500, 9, 1e-300));
    EXPECT_FALSE(rep.pass);
    ASSERT_EQ(rep.failures.size(), kMaxWitnesses);
    EXPECT_GT(rep.failure_count, kMaxWitnesses);
    for (std::size_t i = 1; i < rep.failures.size(); ++i)
        EXPECT_GE(rep.failures[i - 1].residual, rep.failures[i].residual);
    for (const auto& f : rep.failures) {
        ASSERT_TRUE(f.scene.has_value());
        const auto again = replay("t1", options(1, 9, 1e-300), f.trial_index);
        EXPECT_EQ(again.max_residual, f.residual);
    }
}

TEST(Verify, UnknownIdRejected) {
    EXPECT_EQ(code_of([] { verify("zzz", {}); }), ErrorCode::InvalidInput);
}
