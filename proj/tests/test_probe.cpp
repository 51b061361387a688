#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <geoprobe/probe.hpp>

using namespace geoprobe;
using namespace geoprobe::probe;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

/// Runs the installed tool with a shell command line; stderr is discarded.
CliResult cli(const std::string& args, const std::string& env = "") {
    const auto tmp = std::filesystem::temp_directory_path() / ("geoprobe_cli_" + std::to_string(std::rand()) + ".out");
    const std::string cmd = env + " " GEOPROBE_CLI " " + args + " > " + tmp.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream f(tmp);
    std::stringstream ss;
    ss << f.rdbuf();
    r.out = ss.str();
    std::filesystem::remove(tmp);
    return r;
}

RunConfig config(std::string command, std::string target, std::uint64_t trials, std::uint64_t seed) {
    RunConfig c;
    c.command = std::move(command);
    c.target = std::move(target);
    c.trials = trials;
    c.seed = seed;
    return c;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "geoprobe_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

// --- exit codes through the binary ------------------------------------------------------------

TEST(Cli, T9ExplicitSceneLocusRadius) {
    const auto r = cli("verify t9 --trials 1 --seed 7 --scene circles:0,0,1,1,0,1 --k 1");
    ASSERT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["payload"]["extras"]["locus_radius"].get<double>(), 0.8660254037844386);
    EXPECT_NE(r.out.find("\"locus_radius\": 0.8660254037844386"), std::string::npos);
}

TEST(Cli, UnknownTheoremIsUsageError) {
    EXPECT_EQ(cli("verify zzz").code, 1);
    EXPECT_EQ(cli("explore zzz").code, 1);
    EXPECT_EQ(cli("verify t1 --trials 0").code, 1);
    EXPECT_EQ(cli("verify t1 --tol 1").code, 1);
    EXPECT_EQ(cli("verify t1 --bogus-flag").code, 1);
    EXPECT_EQ(cli("").code, 1);
}

TEST(Cli, UnknownTargetMessageListsValidTargets) {
    std::ostringstream out, err;
    EXPECT_EQ(run(config("verify", "zzz", 1, 0), out, err), kExitUsage);
    for (auto id : kTheoremIds) EXPECT_NE(err.str().find(std::string(id)), std::string::npos);
    EXPECT_TRUE(out.str().empty());
}

TEST(Cli, FailingCheckExitsTwo) {
    const auto r = cli("verify t1 --trials 20 --seed 3 --tol 1e-300");
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(Json::parse(r.out)["payload"]["pass"].get<bool>());
}

TEST(Cli, RefutedExplorationExitsTwo) {
    const auto r = cli("explore polygon-product --ngon 5 --trials 200");
    ASSERT_EQ(r.code, 2);
    EXPECT_EQ(Json::parse(r.out)["payload"]["verdict"]["kind"], "refuted");
}

TEST(Cli, IncompatibleParamsExitOne) {
    EXPECT_EQ(cli("explore ratio-sum --ngon 4 --d 4").code, 1);
    EXPECT_EQ(cli("explore ratio-sum --ngon 4 --d 0").code, 1);
    EXPECT_EQ(cli("explore locus --scene circles:0,0,1,5,0,1").code, 1);
    EXPECT_EQ(cli("verify t3 --scene circles:0,0,1,1,0,1").code, 1);
    EXPECT_EQ(cli("verify t3 --scene triangle:0,0,1").code, 1);
}

TEST(Cli, GenerationExhaustedExitsThree) {
    // coincident circle and round ellipse: every secant has M1 = M2
    EXPECT_EQ(cli("explore locus --scene circle-ellipse:0,0,1,0,0,1,1,0 --trials 3").code, 3);
}

TEST(Cli, UnwritablePathExitsFour) {
    EXPECT_EQ(cli("verify t1 --trials 5 --out /nonexistent-dir/report.json").code, 4);
}

TEST(Cli, SeedFromEnvironmentFlagWins) {
    const auto env = cli("verify t1 --trials 3", "GEOPROBE_SEED=77");
    ASSERT_EQ(env.code, 0);
    EXPECT_EQ(Json::parse(env.out)["payload"]["seed"].get<std::uint64_t>(), 77u);
    const auto flag = cli("verify t1 --trials 3 --seed 5", "GEOPROBE_SEED=77");
    EXPECT_EQ(Json::parse(flag.out)["payload"]["seed"].get<std::uint64_t>(), 5u);
    EXPECT_EQ(cli("verify t1 --trials 3", "GEOPROBE_SEED=abc").code, 1);
}

TEST(Cli, ExploreExamples) {
    const auto hex = Json::parse(cli("explore polygon-cevian-min --ngon 6 --seed 3").out)["payload"]["summary"];
    EXPECT_NEAR(hex["min_value"].get<double>(), 6.0, 1e-9);
    EXPECT_NEAR(hex["argmin"][0].get<double>(), 0.0, 1e-6);
    EXPECT_NEAR(hex["argmin"][1].get<double>(), 0.0, 1e-6);
    const auto rs = Json::parse(cli("explore ratio-sum --ngon 3 --d 1").out)["payload"]["summary"];
    EXPECT_NEAR(rs["argmin"].get<double>(), 0.5, 1e-6);
}

TEST(Cli, WritesJsonCsvAndSvgFiles) {
    const auto stem = scratch("locus_run");
    const auto r = cli("explore locus --trials 50 --seed 2 --out " + stem.string() + " --format json csv svg");
    ASSERT_EQ(r.code, 0);
    const auto json = Json::parse(slurp(stem.string() + ".json"));
    EXPECT_EQ(json["payload"]["experiment_id"], "locus");
    const auto csv = slurp(stem.string() + ".csv");
    EXPECT_EQ(csv.rfind("trial,from_b,x,y,residual\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_NE(slurp(stem.string() + ".svg").find("stroke=\"red\""), std::string::npos);
}

// --- replay -----------------------------------------------------------------------------------

TEST(Replay, CheckFailureReplaysExactly) {
    auto c = config("verify", "t3", 200, 11);
    c.tol = 1e-300;
    const auto out = execute(c);
    const auto& failures = out.envelope["payload"]["failures"];
    ASSERT_FALSE(failures.empty());
    for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 5); ++i) {
        auto rc = c;
        rc.replay = {11, failures[i]["trial_index"].get<std::uint64_t>()};
        const auto again = execute(rc);
        EXPECT_EQ(again.envelope["payload"]["max_residual"], failures[i]["residual"]);
        EXPECT_EQ(again.envelope["payload"]["trials"].get<int>(), 1);
    }
}

TEST(Replay, ExplicitSceneFailureReplaysExactly) {
    auto c = config("verify", "t9", 50, 4);
    c.tol = 1e-300;
    c.scene = "circles:0,0,1,1.2,0.3,0.8";
    c.k = 2.0;
    const auto out = execute(c);
    const auto& f = out.envelope["payload"]["failures"];
    ASSERT_FALSE(f.empty());
    auto rc = c;
    rc.replay = {4, f[0]["trial_index"].get<std::uint64_t>()};
    EXPECT_EQ(execute(rc).envelope["payload"]["max_residual"], f[0]["residual"]);
}

TEST(Replay, RefutationReplaysExactly) {
    auto c = config("explore", "polygon-product", 200, 0);
    const auto out = execute(c);
    const auto& w = out.envelope["payload"]["verdict"]["witness"];
    ASSERT_FALSE(w.is_null());
    auto rc = c;
    rc.replay = {w["seed"].get<std::uint64_t>(), w["index"].get<std::uint64_t>()};
    const auto again = execute(rc);
    EXPECT_EQ(again.exit_code, kExitFail);
    EXPECT_EQ(again.envelope["payload"]["summary"]["replay_residual"], w["residual"]);
    EXPECT_EQ(again.envelope["payload"]["verdict"]["witness"]["residual"], w["residual"]);
}

TEST(Replay, RestartExperimentsRejectReplay) {
    auto c = config("explore", "ellipse-pair-bound", 1, 0);
    c.replay = {0, 0};
    std::ostringstream out, err;
    EXPECT_EQ(run(c, out, err), kExitUsage);
}

// --- schema, round trip, determinism ----------------------------------------------------------

TEST(Schema, CheckEnvelopeFieldsAndTypes) {
    const auto j = execute(config("verify", "t1", 10, 1)).envelope;
    for (auto key : {"tool_version", "created_at_utc", "config", "payload", "wall_time_ms", "exit_code"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j.size(), 6u);
    EXPECT_TRUE(j["tool_version"].is_string());
    EXPECT_TRUE(j["created_at_utc"].is_string());
    EXPECT_EQ(j["created_at_utc"].get<std::string>().size(), 20u);
    const auto& p = j["payload"];
    const std::vector<std::string> keys{"kind",         "theorem_id", "trials",        "seed",     "tolerance",
                                        "max_residual", "mean_residual", "pass",       "failure_count", "failures",
                                        "extras"};
    EXPECT_EQ(p.size(), keys.size());
    for (const auto& k : keys) EXPECT_TRUE(p.contains(k)) << k;
    EXPECT_EQ(p["kind"], "check");
    EXPECT_TRUE(p["trials"].is_number_unsigned());
    EXPECT_TRUE(p["seed"].is_number_unsigned());
    EXPECT_TRUE(p["tolerance"].is_number_float());
    EXPECT_TRUE(p["max_residual"].is_number());
    EXPECT_TRUE(p["pass"].is_boolean());
    EXPECT_TRUE(p["failures"].is_array());
    EXPECT_TRUE(p["extras"].is_object());
}

TEST(Schema, ExploreEnvelopeFieldsAndTypes) {
    const auto p = execute(config("explore", "cycle-projection-3d", 10, 1)).envelope["payload"];
    const std::vector<std::string> keys{"kind",         "experiment_id", "params",  "trials",  "seed",  "tolerance",
                                        "max_residual", "mean_residual", "verdict", "summary", "extras"};
    EXPECT_EQ(p.size(), keys.size());
    for (const auto& k : keys) EXPECT_TRUE(p.contains(k)) << k;
    EXPECT_EQ(p["kind"], "explore");
    EXPECT_EQ(p["verdict"]["kind"], "supported");
    EXPECT_TRUE(p["summary"].is_object());
    EXPECT_TRUE(p["extras"]["columns"].is_array());
}

TEST(RoundTrip, CheckReportPayload) {
    auto c = config("verify", "t7", 30, 2);
    c.tol = 1e-300;
    const auto p = execute(c).envelope["payload"];
    const auto back = check_report_from_json(p);
    EXPECT_EQ(to_json(back), p);
    ASSERT_FALSE(back.failures.empty());
    ASSERT_TRUE(back.failures[0].scene.has_value());
    EXPECT_EQ(back.failures[0].scene->kind, SceneKind::AcuteTriangle);
}

TEST(RoundTrip, ExploreResultPayload) {
    for (auto id : {"locus", "polygon-product", "ellipse-pair-bound", "face-pedal"}) {
        auto c = config("explore", id, 20, 3);
        c.threads = 1;
        c.restarts = 4;
        const auto out = execute(c);
        const auto& p = out.envelope["payload"];
        const auto back = explore_result_from_json(p, dataset_from_csv(*out.csv));
        EXPECT_EQ(to_json(back), p) << id;
        EXPECT_EQ(to_csv(back.rows), *out.csv) << id;
    }
}

TEST(RoundTrip, NonFiniteNumbers) {
    CheckReport r;
    r.theorem_id = "t3";
    r.max_residual = std::numeric_limits<double>::infinity();
    r.failures.push_back({4, std::numeric_limits<double>::quiet_NaN(), std::nullopt});
    const auto back = check_report_from_json(Json::parse(to_json(r).dump()));
    EXPECT_TRUE(std::isinf(back.max_residual));
    EXPECT_TRUE(std::isnan(back.failures[0].residual));
}

TEST(Determinism, PayloadIndependentOfRunAndThreads) {
    auto c = config("verify", "t1", 1000, 42);
    c.threads = 1;
    const auto a = execute(c).envelope["payload"].dump();
    const auto b = execute(c).envelope["payload"].dump();
    c.threads = 4;
    const auto d = execute(c).envelope["payload"].dump();
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, d);
}

TEST(Determinism, ExploreCsvIndependentOfThreads) {
    auto c = config("explore", "locus", 500, 9);
    c.scene = "spheres:0,0,0,1,1,0.2,0,1.1";
    c.threads = 1;
    const auto a = execute(c);
    c.threads = 3;
    const auto b = execute(c);
    EXPECT_EQ(*a.csv, *b.csv);
    EXPECT_EQ(a.envelope["payload"].dump(), b.envelope["payload"].dump());
}

// --- CSV and SVG ------------------------------------------------------------------------------

TEST(Csv, SeventeenDigitsRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, std::sqrt(2.0), 1e-300, 6.02214076e23, -0.8660254037844386}) {
        const auto s = format_double(v);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    }
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    Dataset d;
    d.columns = {"a", "b"};
    d.add({1.0, 0.5});
    EXPECT_EQ(to_csv(d), "a,b\n1,0.5\n");
}

TEST(Svg, T9DefaultSceneFigure) {
    auto c = config("trace", "t9", 200, 1);
    const auto out = execute(c);
    ASSERT_TRUE(out.svg.has_value());
    const auto& s = *out.svg;
    std::size_t black = 0, red = 0;
    for (std::size_t pos = 0; (pos = s.find("stroke=\"black\" stroke-width=\"1.5\"/>", pos)) != std::string::npos; ++pos)
        ++black;
    for (std::size_t pos = 0; (pos = s.find("stroke=\"red\"", pos)) != std::string::npos; ++pos) ++red;
    EXPECT_EQ(red, 1u);
    // two input circles plus two open excluded markers
    EXPECT_EQ(black, 4u);
    const auto fit = out.envelope["payload"]["summary"];
    EXPECT_NEAR(fit["fitted_radius"].get<double>(), std::sqrt(3.0) / 2.0, 1e-9);
    EXPECT_EQ(execute(c).svg, out.svg);
}

TEST(Svg, EmptySampleSetIsValid) {
    SvgFigure fig;
    fig.shapes = {Circle({0.0, 0.0}, 1.0), Circle({1.0, 0.0}, 1.0)};
    const auto s = render_svg(fig);
    EXPECT_EQ(s.rfind("<?xml", 0), 0u);
    EXPECT_NE(s.find("</svg>\n"), std::string::npos);
    EXPECT_EQ(render_svg(SvgFigure{}).find("</svg>") != std::string::npos, true);
}

TEST(Svg, SphereCloudProjectedWithAxisLabel) {
    auto c = config("trace", "locus", 100, 1);
    c.scene = "spheres:0,0,0,1,1,0,0,1";
    const auto out = execute(c);
    ASSERT_TRUE(out.svg.has_value());
    EXPECT_NE(out.svg->find("projection along z"), std::string::npos);
    EXPECT_NE(out.svg->find("stroke=\"red\""), std::string::npos);
}

TEST(Svg, VerifyWithoutFigureIsUsageError) {
    auto c = config("verify", "t1", 2, 0);
    c.formats = {"svg"};
    std::ostringstream out, err;
    EXPECT_EQ(run(c, out, err), kExitUsage);
}

// --- scene specs ------------------------------------------------------------------------------

TEST(SceneSpec, Parsing) {
    const auto s = parse_scene_spec("triangle:0,0,4,0,1,3@1,1");
    EXPECT_EQ(s.kind, "triangle");
    EXPECT_EQ(s.values.size(), 6u);
    ASSERT_TRUE(s.probe.has_value());
    EXPECT_EQ((*s.probe)[1], 1.0);
    EXPECT_THROW(parse_scene_spec("triangle"), UsageError);
    EXPECT_THROW(parse_scene_spec("triangle:0,0,x"), UsageError);
    EXPECT_THROW(parse_scene_spec("triangle:0,0,"), UsageError);
}

TEST(SceneSpec, CirclePointsInDegrees) {
    const auto s = theorem_scene_from_spec("t8", parse_scene_spec("circlepoints:0,0,2,0,90,180"));
    ASSERT_EQ(s.points.size(), 3u);
    EXPECT_NEAR(s.points[1].x(), 0.0, 1e-15);
    EXPECT_NEAR(s.points[1].y(), 2.0, 1e-15);
}

TEST(SceneSpec, ExplicitTriangleCentroidDefault) {
    auto c = config("verify", "t3", 1, 0);
    c.scene = "triangle:0,0,3,0,0,3";
    const auto p = execute(c).envelope["payload"];
    EXPECT_TRUE(p["pass"].get<bool>());
    EXPECT_NEAR(p["extras"]["min_E"].get<double>(), 6.0, 1e-12);
}

TEST(OutputPath, StemAndExtension) {
    EXPECT_EQ(output_path("run.json", "json", 1), "run.json");
    EXPECT_EQ(output_path("run.json", "csv", 2), "run.csv");
    EXPECT_EQ(output_path("out/run", "svg", 1), "out/run.svg");
    EXPECT_EQ(output_path("a.b/run", "csv", 2), "a.b/run.csv");
}
