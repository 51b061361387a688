#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scene.hpp"

namespace geoprobe {

using Json = nlohmann::json;

inline constexpr std::size_t kMaxWitnesses = 32;

struct Failure {
    std::uint64_t trial_index = 0;
    double residual = 0.0;
    std::optional<Scene> scene;
};

/// One theorem's verdict over a batch of trials.
struct CheckReport {
    std::string theorem_id;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    std::uint64_t failure_count = 0;
    std::vector<Failure> failures;  // worst first, at most kMaxWitnesses
    bool pass = true;
    double wall_time_ms = 0.0;
    Json extras = Json::object();
};

namespace detail {
inline double sort_key(double r) { return std::isnan(r) ? std::numeric_limits<double>::infinity() : r; }
}  // namespace detail

/// Builds a report from per-trial residuals (index order). `scene_of` regenerates the scene of a
/// failing trial for the witness list; it may return nullopt for caller-supplied inputs.
inline CheckReport aggregate_residuals(std::string theorem_id, std::uint64_t seed, double tolerance,
                                       const std::vector<double>& residuals,
                                       const std::function<std::optional<Scene>(std::uint64_t)>& scene_of = {}) {
    CheckReport r;
    r.theorem_id = std::move(theorem_id);
    r.seed = seed;
    r.tolerance = tolerance;
    r.trials = residuals.size();

    double sum = 0.0;
    std::vector<Failure> bad;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const double v = residuals[i];
        const double key = detail::sort_key(v);
        r.max_residual = std::max(r.max_residual, key);
        sum += key;
        if (!(v < tolerance)) bad.push_back({i, v, std::nullopt});
    }
    r.mean_residual = residuals.empty() ? 0.0 : sum / static_cast<double>(residuals.size());
    r.mean_residual = std::min(r.mean_residual, r.max_residual);
    r.failure_count = bad.size();
    std::stable_sort(bad.begin(), bad.end(), [](const Failure& a, const Failure& b) {
        return detail::sort_key(a.residual) > detail::sort_key(b.residual);
    });
    if (bad.size() > kMaxWitnesses) bad.resize(kMaxWitnesses);
    if (scene_of)
        for (auto& f : bad) f.scene = scene_of(f.trial_index);
    r.failures = std::move(bad);
    r.pass = r.failures.empty();
    return r;
}

/// Tabular dataset with named real columns.
struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row) { rows.push_back(std::move(row)); }

    std::size_t column(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        require(it != columns.end(), ErrorCode::InvalidInput, "unknown column " + name);
        return static_cast<std::size_t>(it - columns.begin());
    }
};

enum class VerdictKind { Supported, Refuted, Inconclusive };

inline std::string to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::Supported: return "supported";
        case VerdictKind::Refuted: return "refuted";
        case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct Witness {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    double residual = 0.0;
};

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::optional<Witness> witness;  // always set for refuted
};

/// Supported when every residual is below tol, refuted when one exceeds 10 tol, else inconclusive.
inline Verdict classify_residuals(const std::vector<double>& residuals, double tol, std::uint64_t seed,
                                  const std::vector<std::uint64_t>& indices = {}) {
    Verdict v;
    double worst = -1.0;
    std::size_t worst_i = 0;
    bool all_below = true;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const double r = detail::sort_key(residuals[i]);
        if (!(r < tol)) all_below = false;
        if (r > worst) {
            worst = r;
            worst_i = i;
        }
    }
    if (all_below) {
        v.kind = VerdictKind::Supported;
    } else if (worst > 10.0 * tol) {
        v.kind = VerdictKind::Refuted;
        v.witness = Witness{seed, indices.empty() ? worst_i : indices[worst_i], residuals[worst_i]};
    }
    return v;
}

/// One open-problem experiment's output.
struct ExploreResult {
    std::string experiment_id;
    Json params = Json::object();
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    double tolerance = 1e-9;
    Dataset rows;
    Json summary = Json::object();
    std::optional<Verdict> verdict;
    std::optional<double> max_residual;
    std::optional<double> mean_residual;
};

/// Best-fit circle / sphere of a locus sample.
struct LocusFit {
    std::vector<double> center;
    double radius = 0.0;
    double rms_residual = 0.0;
    double max_residual = 0.0;
};

}  // namespace geoprobe
