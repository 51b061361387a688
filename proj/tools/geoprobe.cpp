#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include <geoprobe/probe.hpp>

namespace probe = geoprobe::probe;

namespace {

void add_common(CLI::App* app, probe::RunConfig& cfg, std::optional<std::uint64_t>& seed,
                std::optional<std::string>& replay) {
    app->add_option("target", cfg.target, "theorem id, experiment id or trace target")->required();
    app->add_option("--trials", cfg.trials, "number of trials");
    app->add_option("--seed", seed, "64-bit seed (default: GEOPROBE_SEED, else 0)");
    app->add_option("--tol", cfg.tol, "tolerance in (0, 1)");
    app->add_option("--threads", cfg.threads, "worker threads");
    app->add_option("--out", cfg.out, "output path or stem");
    app->add_option("--format", cfg.formats, "json, csv or svg (repeatable)")->take_all();
    app->add_option("--scene,--shapes", cfg.scene, "explicit scene, kind:v1,v2,...[@probe]");
    app->add_option("--k", cfg.k, "division ratio");
    app->add_option("--ngon", cfg.ngon, "vertex or point count");
    app->add_option("--d", cfg.d, "side offset for ratio-sum");
    app->add_option("--replay", replay, "re-run one trial, SEED:INDEX");
    app->add_option("--objective", cfg.objective, "E or F");
    app->add_option("--quantity", cfg.quantity, "pairwise-product-sum, area or perimeter");
    app->add_option("--solid", cfg.solid, "cycle, tetrahedron or octahedron");
    app->add_option("--restarts", cfg.restarts, "local search restarts");
    app->add_option("--ratios", cfg.ratios, "per-side ratios k1,...,kn")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geoprobe: randomized checks and numerical experiments for classical triangle and circle results"};
    app.require_subcommand(1);
    probe::RunConfig cfg;
    cfg.threads = geoprobe::default_thread_count();
    std::optional<std::uint64_t> seed;
    std::optional<std::string> replay;
    for (const char* name : {"verify", "explore", "trace"}) {
        const std::string desc = std::string(name) == "verify"  ? "check a theorem over random scenes"
                                 : std::string(name) == "explore" ? "run an open-problem experiment"
                                                                  : "draw a locus figure";
        add_common(app.add_subcommand(name, desc), cfg, seed, replay);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return probe::kExitUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (seed) {
            cfg.seed = *seed;
        } else if (const auto env = probe::seed_from_env()) {
            cfg.seed = *env;
        }
        if (replay) cfg.replay = probe::parse_replay(*replay);
    } catch (const probe::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return probe::kExitUsage;
    }
    return probe::run(cfg, std::cout, std::cerr);
}
