#pragma once

// Command layer behind the geoprobe tool: run configuration, scene specs, dispatch to the
// theorem checks and experiments, and the exit-code contract.

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "conjectures.hpp"
#include "serialize.hpp"
#include "svg.hpp"
#include "theorems.hpp"

namespace geoprobe::probe {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitFail = 2, kExitExhausted = 3, kExitUnwritable = 4 };

struct RunConfig {
    std::string command;  // verify | explore | trace
    std::string target;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    unsigned threads = 1;
    std::optional<std::string> out;
    std::vector<std::string> formats;  // empty: command default
    std::optional<std::string> scene;
    std::optional<double> k;
    std::optional<std::size_t> ngon;
    std::optional<std::size_t> d;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> replay;
    std::optional<std::string> objective;
    std::optional<std::string> quantity;
    std::optional<std::string> solid;
    std::optional<int> restarts;
    std::optional<std::vector<double>> ratios;
};

/// Usage problems detected before or during a run; always exit 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunOutput {
    int exit_code = kExitOk;
    Json envelope;
    std::optional<std::string> csv;
    std::optional<std::string> svg;
};

inline std::string join_ids(auto const& ids) {
    std::string s;
    for (const auto& id : ids) {
        if (!s.empty()) s += ", ";
        s += id;
    }
    return s;
}

inline std::optional<std::uint64_t> seed_from_env() {
    const char* v = std::getenv("GEOPROBE_SEED");
    if (!v || !*v) return std::nullopt;
    std::uint64_t seed = 0;
    const std::string_view s(v);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw UsageError("GEOPROBE_SEED is not an unsigned integer");
    return seed;
}

inline std::pair<std::uint64_t, std::uint64_t> parse_replay(std::string_view s) {
    const auto colon = s.find(':');
    std::uint64_t seed = 0, index = 0;
    if (colon == std::string_view::npos) throw UsageError("--replay expects SEED:INDEX");
    const auto a = std::from_chars(s.data(), s.data() + colon, seed);
    const auto b = std::from_chars(s.data() + colon + 1, s.data() + s.size(), index);
    if (a.ec != std::errc{} || a.ptr != s.data() + colon || b.ec != std::errc{} || b.ptr != s.data() + s.size())
        throw UsageError("--replay expects SEED:INDEX");
    return {seed, index};
}

// --- scene specs ------------------------------------------------------------------------------

/// "kind:v1,v2,...[@p1,p2,...]"; angles in degrees.
struct SceneSpec {
    std::string kind;
    std::vector<double> values;
    std::optional<std::vector<double>> probe;
};

inline std::vector<double> parse_numbers(std::string_view s) {
    std::vector<double> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        const auto tok = s.substr(0, comma);
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
            throw UsageError("bad number '" + std::string(tok) + "' in scene spec");
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
        if (s.empty()) throw UsageError("trailing comma in scene spec");
    }
    return out;
}

inline SceneSpec parse_scene_spec(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0) throw UsageError("scene spec must look like kind:v1,v2,...");
    SceneSpec spec;
    spec.kind = std::string(s.substr(0, colon));
    auto rest = s.substr(colon + 1);
    const auto at = rest.find('@');
    spec.values = parse_numbers(rest.substr(0, at));
    if (at != std::string_view::npos) spec.probe = parse_numbers(rest.substr(at + 1));
    return spec;
}

namespace detail {

inline void expect_kind(const SceneSpec& s, std::initializer_list<std::string_view> kinds) {
    for (auto k : kinds)
        if (s.kind == k) return;
    std::string names;
    for (auto k : kinds) names += (names.empty() ? "" : ", ") + std::string(k);
    throw UsageError("scene kind '" + s.kind + "' does not fit this target (expected " + names + ")");
}

inline void expect_count(const SceneSpec& s, std::size_t n, std::string_view what) {
    if (s.values.size() != n)
        throw UsageError(std::string(what) + " needs " + std::to_string(n) + " numbers, got " +
                         std::to_string(s.values.size()));
}

inline double rad(double deg) { return deg * std::numbers::pi / 180.0; }

inline std::vector<Vec2> points2(const std::vector<double>& v, std::string_view what) {
    if (v.size() % 2 != 0) throw UsageError(std::string(what) + " needs x,y pairs");
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < v.size(); i += 2) out.push_back({v[i], v[i + 1]});
    return out;
}

inline std::vector<Vec3> points3(const std::vector<double>& v, std::string_view what) {
    if (v.size() % 3 != 0) throw UsageError(std::string(what) + " needs x,y,z triples");
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < v.size(); i += 3) out.push_back({v[i], v[i + 1], v[i + 2]});
    return out;
}

inline std::optional<Vec2> probe2(const SceneSpec& s) {
    if (!s.probe) return std::nullopt;
    if (s.probe->size() != 2) throw UsageError("probe point needs x,y");
    return Vec2{(*s.probe)[0], (*s.probe)[1]};
}

inline std::optional<Vec3> probe3(const SceneSpec& s) {
    if (!s.probe) return std::nullopt;
    if (s.probe->size() != 3) throw UsageError("probe point needs x,y,z");
    return Vec3{(*s.probe)[0], (*s.probe)[1], (*s.probe)[2]};
}

inline Ellipse ellipse_from(const double* v) { return Ellipse({v[0], v[1]}, v[2], v[3], rad(v[4])); }

}  // namespace detail

/// Scene for a theorem check from an explicit spec.
inline Scene theorem_scene_from_spec(std::string_view id, const SceneSpec& spec) {
    Scene s;
    if (id == "t1") {
        detail::expect_kind(spec, {"polygon"});
        s.kind = SceneKind::Polygon;
        s.points = detail::points2(spec.values, "polygon");
        if (s.points.size() < 3) throw UsageError("polygon needs at least 3 vertices");
        const Vec2 m = detail::probe2(spec).value_or(Polygon(s.points).vertex_centroid());
        s.probes = {m, m};
    } else if (id == "t2" || id == "t8") {
        detail::expect_kind(spec, {"circlepoints"});
        if (spec.values.size() < 3) throw UsageError("circlepoints needs cx,cy,r followed by angles in degrees");
        s.kind = SceneKind::PointsOnCircle;
        const Circle c({spec.values[0], spec.values[1]}, spec.values[2]);
        s.circles = {c};
        for (std::size_t i = 3; i < spec.values.size(); ++i) {
            const double a = detail::rad(spec.values[i]);
            s.points.push_back(c.center + c.radius * Vec2{std::cos(a), std::sin(a)});
        }
    } else if (id == "t9") {
        detail::expect_kind(spec, {"circles"});
        detail::expect_count(spec, 6, "circles");
        s.kind = SceneKind::CirclePair;
        const auto& v = spec.values;
        s.circles = {Circle({v[0], v[1]}, v[2]), Circle({v[3], v[4]}, v[5])};
    } else {
        detail::expect_kind(spec, {"triangle"});
        detail::expect_count(spec, 6, "triangle");
        s.kind = id == "t7" ? SceneKind::AcuteTriangle : SceneKind::Triangle;
        s.points = detail::points2(spec.values, "triangle");
        s.probes = {detail::probe2(spec).value_or(s.triangle().centroid())};
    }
    return s;
}

inline LocusShapes locus_shapes_from_spec(const SceneSpec& spec) {
    LocusShapes sh;
    const auto& v = spec.values;
    if (spec.kind == "circles") {
        detail::expect_count(spec, 6, "circles");
        sh.kind = LocusKind::Circles;
        sh.circles = {Circle({v[0], v[1]}, v[2]), Circle({v[3], v[4]}, v[5])};
    } else if (spec.kind == "ellipses") {
        detail::expect_count(spec, 10, "ellipses");
        sh.kind = LocusKind::Ellipses;
        sh.ellipses = {detail::ellipse_from(&v[0]), detail::ellipse_from(&v[5])};
    } else if (spec.kind == "circle-ellipse") {
        detail::expect_count(spec, 8, "circle-ellipse");
        sh.kind = LocusKind::CircleEllipse;
        sh.circles = {Circle({v[0], v[1]}, v[2])};
        sh.ellipses = {detail::ellipse_from(&v[3])};
    } else if (spec.kind == "spheres") {
        detail::expect_count(spec, 8, "spheres");
        sh.kind = LocusKind::Spheres;
        sh.spheres = {Sphere({v[0], v[1], v[2]}, v[3]), Sphere({v[4], v[5], v[6]}, v[7])};
    } else {
        detail::expect_kind(spec, {"circles", "ellipses", "circle-ellipse", "spheres"});
    }
    return sh;
}

// --- config -----------------------------------------------------------------------------------

inline std::vector<std::string> effective_formats(const RunConfig& c) {
    if (!c.formats.empty()) return c.formats;
    if (c.command == "trace") return {"svg"};
    if (c.command == "explore" && c.out) return {"json", "csv"};
    return {"json"};
}

inline Json config_json(const RunConfig& c) {
    Json j = {{"command", c.command}, {"target", c.target}, {"trials", c.trials}, {"seed", c.seed},
              {"tol", c.tol},         {"threads", c.threads}, {"formats", effective_formats(c)}};
    if (c.out) j["out"] = *c.out;
    if (c.scene) j["scene"] = *c.scene;
    if (c.k) j["k"] = *c.k;
    if (c.ngon) j["ngon"] = *c.ngon;
    if (c.d) j["d"] = *c.d;
    if (c.replay) j["replay"] = std::to_string(c.replay->first) + ":" + std::to_string(c.replay->second);
    if (c.objective) j["objective"] = *c.objective;
    if (c.quantity) j["quantity"] = *c.quantity;
    if (c.solid) j["solid"] = *c.solid;
    if (c.restarts) j["restarts"] = *c.restarts;
    if (c.ratios) j["ratios"] = *c.ratios;
    return j;
}

inline void validate(const RunConfig& c) {
    if (c.command != "verify" && c.command != "explore" && c.command != "trace")
        throw UsageError("unknown command '" + c.command + "' (expected verify, explore or trace)");
    if (c.command == "verify" && !is_theorem_id(c.target))
        throw UsageError("unknown theorem '" + c.target + "'; valid targets: " + join_ids(kTheoremIds));
    if (c.command == "explore" && !is_experiment_id(c.target))
        throw UsageError("unknown experiment '" + c.target + "'; valid targets: " + join_ids(kExperimentIds));
    if (c.command == "trace" && c.target != "t9" && c.target != "locus")
        throw UsageError("unknown trace target '" + c.target + "'; valid targets: t9, locus");
    if (c.trials < 1) throw UsageError("--trials must be at least 1");
    if (!(c.tol > 0.0 && c.tol < 1.0)) throw UsageError("--tol must lie in (0, 1)");
    if (c.restarts && *c.restarts < 1) throw UsageError("--restarts must be at least 1");
    for (const auto& f : effective_formats(c))
        if (f != "json" && f != "csv" && f != "svg") throw UsageError("unknown format '" + f + "'");
}

// --- verify -----------------------------------------------------------------------------------

namespace detail {

inline CheckReport verify_explicit(std::string_view id, const Scene& base, const VerifyOptions& opt,
                                   const std::vector<std::uint64_t>& indices) {
    const auto start = std::chrono::steady_clock::now();
    auto scene_at = [&](std::uint64_t index) {
        Scene s = base;
        s.seed = opt.seed;
        s.index = index;
        return s;
    };
    const auto outcomes = parallel_map<TrialOutcome>(indices.size(), opt.threads,
                                                     [&](std::size_t i) { return theorem_trial(id, scene_at(indices[i]), opt); });
    std::vector<double> residuals;
    for (const auto& o : outcomes) residuals.push_back(o.residual);
    auto rep = aggregate_residuals(std::string(id), opt.seed, opt.tol, residuals,
                                   [&](std::uint64_t i) { return scene_at(indices[i]); });
    for (auto& f : rep.failures) f.trial_index = indices[f.trial_index];
    rep.extras = theorem_extras(id, outcomes);
    if (id == "t9") {
        const Ratio k(opt.k.value_or(1.0));
        const auto lp = locus_parameters(base.circles[0], base.circles[1], k);
        rep.extras["locus_center"] = {lp.center.x(), lp.center.y()};
        rep.extras["locus_radius"] = lp.radius;
        rep.extras["k"] = k.value();
    } else if (opt.k) {
        rep.extras["k"] = *opt.k;
    }
    rep.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

inline SvgFigure t9_figure(const Circle& c1, const Circle& c2, const std::vector<Vec2>& samples,
                           const std::optional<Circle>& fitted, const std::vector<Vec2>& excluded) {
    SvgFigure fig;
    fig.shapes = {c1, c2};
    fig.samples = samples;
    fig.fitted = fitted;
    fig.excluded = excluded;
    return fig;
}

}  // namespace detail

inline RunOutput run_verify(const RunConfig& c) {
    VerifyOptions opt;
    opt.trials = c.trials;
    opt.seed = c.replay ? c.replay->first : c.seed;
    opt.tol = c.tol;
    opt.threads = c.threads;
    opt.k = c.k;
    if (opt.k && !(*opt.k > 0.0)) throw UsageError("--k must be positive");
    if (c.target == "t4" && opt.k && !(*opt.k < 1.0)) throw UsageError("t4 --k is a fraction in (0, 1)");

    std::optional<Scene> scene;
    if (c.scene) scene = theorem_scene_from_spec(c.target, parse_scene_spec(*c.scene));

    CheckReport rep;
    if (scene) {
        std::vector<std::uint64_t> idx;
        if (c.replay) {
            idx = {c.replay->second};
        } else {
            for (std::uint64_t i = 0; i < c.trials; ++i) idx.push_back(i);
        }
        rep = detail::verify_explicit(c.target, *scene, opt, idx);
        if (c.replay) rep.extras["replay_index"] = c.replay->second;
    } else if (c.replay) {
        rep = replay(c.target, opt, c.replay->second);
    } else {
        rep = verify(c.target, opt);
    }

    RunOutput out;
    out.exit_code = rep.pass ? kExitOk : kExitFail;
    out.envelope = make_envelope(config_json(c), to_json(rep), rep.wall_time_ms, out.exit_code);
    Dataset failures;
    failures.columns = {"trial_index", "residual"};
    for (const auto& f : rep.failures) failures.add({static_cast<double>(f.trial_index), f.residual});
    out.csv = to_csv(failures);
    if (c.target == "t9") {
        const Scene s = scene ? *scene : theorem_scene("t9", opt.seed, c.replay ? c.replay->second : 0);
        const Ratio k(opt.k.value_or(1.0));
        const auto lp = locus_parameters(s.circles[0], s.circles[1], k);
        out.svg = render_svg(detail::t9_figure(s.circles[0], s.circles[1], {}, Circle(lp.center, lp.radius), {lp.a, lp.b}));
    }
    return out;
}

// --- explore ----------------------------------------------------------------------------------

namespace detail {

inline Polygon polygon_for(const RunConfig& c, std::size_t default_n, std::optional<Vec2>* probe = nullptr) {
    if (c.scene) {
        const auto spec = parse_scene_spec(*c.scene);
        expect_kind(spec, {"polygon"});
        auto pts = points2(spec.values, "polygon");
        if (pts.size() < 3) throw UsageError("polygon needs at least 3 vertices");
        if (probe) *probe = probe2(spec);
        return Polygon(std::move(pts));
    }
    const std::size_t n = c.ngon.value_or(default_n);
    if (n < 3) throw UsageError("--ngon must be at least 3");
    return Polygon::regular(n);
}

inline std::optional<SceneSpec> spec_of(const RunConfig& c) {
    if (!c.scene) return std::nullopt;
    return parse_scene_spec(*c.scene);
}

struct ExploreRun {
    ExploreResult result;
    std::optional<LocusRun> locus;
    std::optional<LocusShapes> shapes;
};

inline ExploreRun explore_dispatch(const RunConfig& c, const ExploreOptions& opt) {
    ExploreRun run;
    const std::string& id = c.target;
    if (id == "cycle-projection-3d") {
        CycleProjectionInput in;
        in.n = c.ngon.value_or(6);
        if (in.n < 3) throw UsageError("--ngon must be at least 3");
        if (c.solid) {
            if (*c.solid == "tetrahedron") in.solid = CycleSolid::Tetrahedron;
            else if (*c.solid == "octahedron") in.solid = CycleSolid::Octahedron;
            else if (*c.solid != "cycle") throw UsageError("--solid expects cycle, tetrahedron or octahedron");
        }
        if (auto spec = spec_of(c)) {
            expect_kind(*spec, {"cycle3d"});
            in.cycle = points3(spec->values, "cycle3d");
            if (in.cycle->size() < 3) throw UsageError("cycle3d needs at least 3 points");
            in.m = probe3(*spec);
        }
        run.result = explore_cycle_projection_3d(in, opt);
    } else if (id == "face-pedal") {
        FacePedalInput in;
        in.n = c.ngon.value_or(10);
        if (in.n < 4) throw UsageError("--ngon must be at least 4 for a hull");
        if (auto spec = spec_of(c)) {
            expect_kind(*spec, {"points3d"});
            in.points = points3(spec->values, "points3d");
            in.m = probe3(*spec);
        }
        run.result = explore_face_pedal_dataset(in, opt);
    } else if (id == "polygon-cevian-min") {
        CevianObjective obj = CevianObjective::E;
        if (c.objective) {
            if (*c.objective == "F") obj = CevianObjective::F;
            else if (*c.objective != "E") throw UsageError("--objective expects E or F");
        }
        run.result = explore_polygon_cevian_min(polygon_for(c, 6), obj, opt);
    } else if (id == "ratio-sum") {
        RatioSumInput in;
        in.d = c.d;
        in.ratios = c.ratios;
        run.result = explore_polygon_ratio_sum(polygon_for(c, 3), in, opt);
    } else if (id == "polygon-product") {
        PolygonProductInput in;
        in.n = c.ngon.value_or(5);
        if (in.n < 3) throw UsageError("--ngon must be at least 3");
        if (c.scene) {
            std::optional<Vec2> p;
            in.polygon = polygon_for(c, 5, &p);
            in.p = p;
        }
        run.result = explore_polygon_product(in, opt);
    } else if (id == "pedal-extremum") {
        PedalQuantity q = PedalQuantity::PairwiseProductSum;
        if (c.quantity) {
            const auto parsed = parse_pedal_quantity(*c.quantity);
            if (!parsed) throw UsageError("--quantity expects pairwise-product-sum, area or perimeter");
            q = *parsed;
        }
        const auto spec = spec_of(c);
        if (spec && spec->kind == "points3d") {
            run.result = explore_edge_pedal_dataset(points3(spec->values, "points3d"), opt);
        } else {
            run.result = explore_pedal_polygon_extremum(polygon_for(c, 3), q, opt);
        }
    } else if (id == "ellipse-pair-bound") {
        Ellipse e({0.0, 0.0}, 2.0, 1.0);
        if (auto spec = spec_of(c)) {
            expect_kind(*spec, {"ellipse"});
            if (spec->values.size() == 4) spec->values.push_back(0.0);
            expect_count(*spec, 5, "ellipse");
            e = ellipse_from(spec->values.data());
        }
        run.result = explore_ellipse_pair_bound(e, c.ngon.value_or(4), opt);
    } else {
        LocusShapes sh;
        if (auto spec = spec_of(c)) {
            sh = locus_shapes_from_spec(*spec);
        } else {
            sh.circles = {Circle({0.0, 0.0}, 1.0), Circle({1.0, 0.0}, 1.0)};
        }
        auto lr = explore_locus(sh, Ratio(c.k.value_or(1.0)), opt);
        run.result = lr.result;
        run.locus = std::move(lr);
        run.shapes = sh;
    }
    return run;
}

/// Residual of trial `index` as the verdict sees it, for experiments whose verdict is per trial.
inline std::optional<double> trial_residual(const ExploreResult& r, std::uint64_t index) {
    const auto& d = r.rows;
    const auto trial = d.column("trial");
    for (const auto& row : d.rows) {
        if (row[trial] != static_cast<double>(index)) continue;
        if (r.experiment_id == "polygon-product") return std::abs(row[d.column("L_over_R")] - 1.0);
        if (r.experiment_id == "cycle-projection-3d")
            return row[r.params["solid"] == "cycle" ? d.column("residual") : d.column("identity_residual")];
        if (r.experiment_id == "locus") {
            const auto& cols = d.columns;
            if (std::find(cols.begin(), cols.end(), "coplanar") != cols.end() && row[d.column("coplanar")] != 0.0)
                continue;
            return row[d.column("residual")];
        }
    }
    return std::nullopt;
}

inline bool replayable(std::string_view id) {
    return id == "cycle-projection-3d" || id == "polygon-product" || id == "locus";
}

inline SvgFigure locus_figure(const LocusShapes& sh, const LocusRun& lr) {
    SvgFigure fig;
    const auto& d = lr.result.rows;
    if (sh.kind == LocusKind::Spheres) {
        fig.axis_label = "orthographic projection along z";
        for (const auto& s : sh.spheres) fig.shapes.emplace_back(project_along_axis(s.center, 2), s.radius);
        for (const auto& row : d.rows) fig.samples.push_back({row[d.column("x")], row[d.column("y")]});
        fig.fitted = Circle({lr.fit.center.at(0), lr.fit.center.at(1)}, lr.fit.radius);
        if (lr.excluded_circle)
            for (int i = 0; i < 32; ++i)
                fig.excluded_curve.push_back(
                    project_along_axis(lr.excluded_circle->point_at(2.0 * std::numbers::pi * i / 32.0), 2));
        return fig;
    }
    if (sh.kind == LocusKind::Circles) {
        fig.shapes = sh.circles;
    } else {
        fig.shapes = sh.circles;
        fig.ellipse_shapes = sh.ellipses;
    }
    for (const auto& row : d.rows) fig.samples.push_back({row[d.column("x")], row[d.column("y")]});
    fig.fitted = Circle({lr.fit.center.at(0), lr.fit.center.at(1)}, lr.fit.radius);
    fig.excluded = lr.excluded;
    return fig;
}

}  // namespace detail

inline RunOutput run_explore(const RunConfig& c) {
    ExploreOptions opt;
    opt.trials = c.trials;
    opt.seed = c.replay ? c.replay->first : c.seed;
    opt.tol = c.tol;
    opt.threads = c.threads;
    if (c.restarts) opt.restarts = *c.restarts;
    if (c.k && !(*c.k > 0.0)) throw UsageError("--k must be positive");

    const auto start = std::chrono::steady_clock::now();
    detail::ExploreRun run;
    if (c.replay) {
        if (!detail::replayable(c.target)) throw UsageError("experiment '" + c.target + "' has no per-trial verdict to replay");
        const std::uint64_t index = c.replay->second;
        opt.trials = index + 1;
        run = detail::explore_dispatch(c, opt);
        auto& r = run.result;
        const auto residual = detail::trial_residual(r, index);
        if (!residual) throw UsageError("trial index out of range for this scene");
        const auto trial = r.rows.column("trial");
        std::erase_if(r.rows.rows, [&](const auto& row) { return row[trial] != static_cast<double>(index); });
        r.trials = 1;
        r.summary["replay_index"] = index;
        r.summary["replay_residual"] = number_json(*residual);
        r.verdict = classify_residuals({*residual}, opt.tol, opt.seed, {index});
        r.max_residual = geoprobe::detail::sort_key(*residual);
        r.mean_residual = r.max_residual;
    } else {
        run = detail::explore_dispatch(c, opt);
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    RunOutput out;
    const bool refuted = run.result.verdict && run.result.verdict->kind == VerdictKind::Refuted;
    out.exit_code = refuted ? kExitFail : kExitOk;
    out.envelope = make_envelope(config_json(c), to_json(run.result), ms, out.exit_code);
    out.csv = to_csv(run.result.rows);
    if (run.locus) out.svg = render_svg(detail::locus_figure(*run.shapes, *run.locus));
    return out;
}

inline RunOutput run_trace(const RunConfig& c) {
    RunConfig e = c;
    e.command = "explore";
    e.target = "locus";
    if (c.target == "t9" && c.scene) detail::expect_kind(parse_scene_spec(*c.scene), {"circles"});
    auto out = run_explore(e);
    out.envelope["config"] = config_json(c);
    return out;
}

// --- top level --------------------------------------------------------------------------------

inline RunOutput execute(const RunConfig& c) {
    validate(c);
    if (c.command == "verify") return run_verify(c);
    if (c.command == "explore") return run_explore(c);
    return run_trace(c);
}

inline int exit_code_for(const Error& e) {
    return e.code() == ErrorCode::GenerationExhausted ? kExitExhausted : kExitUsage;
}

/// Output path per format: an --out with an extension is used verbatim for a single format,
/// otherwise it is a stem and each format appends its own extension.
inline std::string output_path(const std::string& out, const std::string& format, std::size_t format_count) {
    const auto slash = out.find_last_of('/');
    const auto dot = out.find_last_of('.');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    if (has_ext && format_count == 1) return out;
    std::string stem = out;
    if (has_ext) {
        const std::string ext = out.substr(dot + 1);
        if (ext == "json" || ext == "csv" || ext == "svg") stem = out.substr(0, dot);
    }
    return stem + "." + format;
}

/// Runs the configuration, writes requested outputs (files or stdout) and returns the exit code.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    RunOutput result;
    try {
        result = execute(c);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }

    const auto formats = effective_formats(c);
    for (const auto& f : formats) {
        std::string body;
        if (f == "json") {
            body = dump_json(result.envelope);
        } else if (f == "csv") {
            body = result.csv.value_or("");
        } else {
            if (!result.svg) {
                err << "usage error: target '" << c.target << "' has no 2D figure\n";
                return kExitUsage;
            }
            body = *result.svg;
        }
        if (!c.out) {
            out << body;
            continue;
        }
        const auto path = output_path(*c.out, f, formats.size());
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (file) file << body;
        if (!file) {
            err << "error: cannot write " << path << "\n";
            return kExitUnwritable;
        }
    }
    if (result.exit_code == kExitFail) {
        const auto& p = result.envelope["payload"];
        if (p["kind"] == "check")
            err << "FAIL: " << p["failure_count"] << " trial(s) above tolerance; replay with --replay "
                << p["seed"] << ":" << (p["failures"].empty() ? Json(0) : p["failures"][0]["trial_index"]) << "\n";
        else
            err << "REFUTED: witness " << p["verdict"]["witness"].dump() << "\n";
    }
    return result.exit_code;
}

}  // namespace geoprobe::probe
