#pragma once

// JSON envelope and CSV dataset output for check reports and experiment results.

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <optional>
#include <string>
#include <string_view>

#include "report.hpp"
#include "scene.hpp"

#ifndef GEOPROBE_VERSION
#define GEOPROBE_VERSION "0.0.0"
#endif

namespace geoprobe {

inline constexpr std::string_view kToolVersion = GEOPROBE_VERSION;

// --- numbers ----------------------------------------------------------------------------------

/// Finite values stay numbers; inf and nan become strings so they survive a round trip.
inline Json number_json(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double number_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        fail(ErrorCode::InvalidInput, "bad number " + s);
    }
    return j.get<double>();
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// --- scenes -----------------------------------------------------------------------------------

inline std::optional<SceneKind> parse_scene_kind(std::string_view s) {
    for (auto k : {SceneKind::Triangle, SceneKind::AcuteTriangle, SceneKind::Polygon, SceneKind::PointsOnCircle,
                   SceneKind::CirclePair, SceneKind::SpherePair, SceneKind::Cycle3d, SceneKind::PointCloud3d})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

namespace detail {

template <std::size_t N>
Json vec_json(const Vec<N>& v) {
    Json a = Json::array();
    for (std::size_t i = 0; i < N; ++i) a.push_back(v[i]);
    return a;
}

template <std::size_t N>
Vec<N> vec_from_json(const Json& j) {
    require(j.is_array() && j.size() == N, ErrorCode::InvalidInput, "bad point");
    Vec<N> v;
    for (std::size_t i = 0; i < N; ++i) v[i] = j[i].get<double>();
    return v;
}

template <std::size_t N>
Json points_json(const std::vector<Vec<N>>& pts) {
    Json a = Json::array();
    for (const auto& p : pts) a.push_back(vec_json(p));
    return a;
}

template <std::size_t N>
std::vector<Vec<N>> points_from_json(const Json& j) {
    std::vector<Vec<N>> out;
    for (const auto& p : j) out.push_back(vec_from_json<N>(p));
    return out;
}

template <std::size_t N>
Json balls_json(const std::vector<Ball<N>>& balls) {
    Json a = Json::array();
    for (const auto& b : balls) a.push_back({{"center", vec_json(b.center)}, {"radius", b.radius}});
    return a;
}

template <std::size_t N>
std::vector<Ball<N>> balls_from_json(const Json& j) {
    std::vector<Ball<N>> out;
    for (const auto& b : j) out.emplace_back(vec_from_json<N>(b.at("center")), b.at("radius").get<double>());
    return out;
}

}  // namespace detail

inline Json scene_to_json(const Scene& s) {
    Json j = {{"kind", std::string(to_string(s.kind))}, {"seed", s.seed}, {"index", s.index}};
    if (!s.points.empty()) j["points"] = detail::points_json(s.points);
    if (!s.probes.empty()) j["probes"] = detail::points_json(s.probes);
    if (!s.points3.empty()) j["points3"] = detail::points_json(s.points3);
    if (!s.probes3.empty()) j["probes3"] = detail::points_json(s.probes3);
    if (!s.circles.empty()) j["circles"] = detail::balls_json(s.circles);
    if (!s.spheres.empty()) j["spheres"] = detail::balls_json(s.spheres);
    return j;
}

inline Scene scene_from_json(const Json& j) {
    Scene s;
    const auto kind = parse_scene_kind(j.at("kind").get<std::string>());
    require(kind.has_value(), ErrorCode::InvalidInput, "unknown scene kind");
    s.kind = *kind;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.index = j.at("index").get<std::uint64_t>();
    if (j.contains("points")) s.points = detail::points_from_json<2>(j["points"]);
    if (j.contains("probes")) s.probes = detail::points_from_json<2>(j["probes"]);
    if (j.contains("points3")) s.points3 = detail::points_from_json<3>(j["points3"]);
    if (j.contains("probes3")) s.probes3 = detail::points_from_json<3>(j["probes3"]);
    if (j.contains("circles")) s.circles = detail::balls_from_json<2>(j["circles"]);
    if (j.contains("spheres")) s.spheres = detail::balls_from_json<3>(j["spheres"]);
    return s;
}

// --- payloads ---------------------------------------------------------------------------------

inline Json to_json(const CheckReport& r) {
    Json failures = Json::array();
    for (const auto& f : r.failures) {
        Json jf = {{"trial_index", f.trial_index}, {"residual", number_json(f.residual)}};
        if (f.scene) jf["scene"] = scene_to_json(*f.scene);
        failures.push_back(std::move(jf));
    }
    return {{"kind", "check"},
            {"theorem_id", r.theorem_id},
            {"trials", r.trials},
            {"seed", r.seed},
            {"tolerance", r.tolerance},
            {"max_residual", number_json(r.max_residual)},
            {"mean_residual", number_json(r.mean_residual)},
            {"pass", r.pass},
            {"failure_count", r.failure_count},
            {"failures", std::move(failures)},
            {"extras", r.extras}};
}

inline CheckReport check_report_from_json(const Json& j) {
    require(j.at("kind") == "check", ErrorCode::InvalidInput, "payload is not a check report");
    CheckReport r;
    r.theorem_id = j.at("theorem_id").get<std::string>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.tolerance = j.at("tolerance").get<double>();
    r.max_residual = number_from_json(j.at("max_residual"));
    r.mean_residual = number_from_json(j.at("mean_residual"));
    r.pass = j.at("pass").get<bool>();
    r.failure_count = j.at("failure_count").get<std::uint64_t>();
    for (const auto& jf : j.at("failures")) {
        Failure f;
        f.trial_index = jf.at("trial_index").get<std::uint64_t>();
        f.residual = number_from_json(jf.at("residual"));
        if (jf.contains("scene")) f.scene = scene_from_json(jf["scene"]);
        r.failures.push_back(std::move(f));
    }
    r.extras = j.at("extras");
    return r;
}

inline Json to_json(const Verdict& v) {
    Json j = {{"kind", to_string(v.kind)}};
    if (v.witness)
        j["witness"] = {{"seed", v.witness->seed}, {"index", v.witness->index}, {"residual", number_json(v.witness->residual)}};
    return j;
}

inline Verdict verdict_from_json(const Json& j) {
    Verdict v;
    const auto k = j.at("kind").get<std::string>();
    if (k == "supported") v.kind = VerdictKind::Supported;
    else if (k == "refuted") v.kind = VerdictKind::Refuted;
    else v.kind = VerdictKind::Inconclusive;
    if (j.contains("witness")) {
        const auto& w = j["witness"];
        v.witness = Witness{w.at("seed").get<std::uint64_t>(), w.at("index").get<std::uint64_t>(),
                            number_from_json(w.at("residual"))};
    }
    return v;
}

inline Json to_json(const ExploreResult& r) {
    auto opt_number = [](const std::optional<double>& v) { return v ? number_json(*v) : Json(nullptr); };
    return {{"kind", "explore"},
            {"experiment_id", r.experiment_id},
            {"params", r.params},
            {"trials", r.trials},
            {"seed", r.seed},
            {"tolerance", r.tolerance},
            {"max_residual", opt_number(r.max_residual)},
            {"mean_residual", opt_number(r.mean_residual)},
            {"verdict", r.verdict ? to_json(*r.verdict) : Json(nullptr)},
            {"summary", r.summary},
            {"extras", {{"columns", r.rows.columns}, {"row_count", r.rows.rows.size()}}}};
}

/// Restores every payload field. Dataset rows travel in the CSV; pass it back in as `rows` to
/// rebuild the full result.
inline ExploreResult explore_result_from_json(const Json& j, std::optional<Dataset> rows = std::nullopt) {
    require(j.at("kind") == "explore", ErrorCode::InvalidInput, "payload is not an experiment result");
    ExploreResult r;
    r.experiment_id = j.at("experiment_id").get<std::string>();
    r.params = j.at("params");
    r.trials = j.at("trials").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.tolerance = j.at("tolerance").get<double>();
    if (!j.at("max_residual").is_null()) r.max_residual = number_from_json(j["max_residual"]);
    if (!j.at("mean_residual").is_null()) r.mean_residual = number_from_json(j["mean_residual"]);
    if (!j.at("verdict").is_null()) r.verdict = verdict_from_json(j["verdict"]);
    r.summary = j.at("summary");
    r.rows.columns = j.at("extras").at("columns").get<std::vector<std::string>>();
    if (rows) {
        require(rows->columns == r.rows.columns, ErrorCode::InvalidInput, "CSV columns do not match the payload");
        require(rows->rows.size() == j["extras"].at("row_count").get<std::size_t>(), ErrorCode::InvalidInput,
                "CSV row count does not match the payload");
        r.rows = std::move(*rows);
    }
    return r;
}

// --- envelope ---------------------------------------------------------------------------------

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Top-level report. Timing and timestamps sit outside the payload so payloads compare byte for byte.
inline Json make_envelope(const Json& config, Json payload, double wall_time_ms, int exit_code) {
    return {{"tool_version", std::string(kToolVersion)},
            {"created_at_utc", utc_timestamp()},
            {"config", config},
            {"payload", std::move(payload)},
            {"wall_time_ms", wall_time_ms},
            {"exit_code", exit_code}};
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// --- CSV --------------------------------------------------------------------------------------

inline std::string to_csv(const Dataset& d) {
    std::string out;
    for (std::size_t i = 0; i < d.columns.size(); ++i) {
        if (i) out += ',';
        out += d.columns[i];
    }
    out += '\n';
    for (const auto& row : d.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline Dataset dataset_from_csv(std::string_view csv) {
    Dataset d;
    bool header = true;
    while (!csv.empty()) {
        const auto nl = csv.find('\n');
        std::string_view line = csv.substr(0, nl);
        csv.remove_prefix(nl == std::string_view::npos ? csv.size() : nl + 1);
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                cells.emplace_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (header) {
            d.columns = std::move(cells);
            header = false;
            continue;
        }
        require(cells.size() == d.columns.size(), ErrorCode::InvalidInput, "ragged CSV row");
        std::vector<double> row;
        for (const auto& c : cells) {
            if (c == "nan" || c == "inf" || c == "-inf") {
                row.push_back(number_from_json(Json(c)));
                continue;
            }
            double v = 0.0;
            const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            require(res.ec == std::errc{} && res.ptr == c.data() + c.size(), ErrorCode::InvalidInput, "bad CSV number");
            row.push_back(v);
        }
        d.rows.push_back(std::move(row));
    }
    return d;
}

}  // namespace geoprobe
