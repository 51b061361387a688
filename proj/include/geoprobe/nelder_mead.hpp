#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace geoprobe {

struct NelderMeadOptions {
    double initial_step = 0.1;
    double xtol = 1e-9;          // stop when every vertex is within xtol of the best one
    std::size_t max_evals = 20000;
    int polish_restarts = 2;     // re-seed a fresh simplex at the optimum this many times
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t evals = 0;
    bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

namespace detail {

inline NelderMeadResult nelder_mead_once(const Objective& f, std::vector<double> x0, double step,
                                         const NelderMeadOptions& opt, std::size_t budget) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    auto point = [&](double coef, const std::vector<double>& worst, std::vector<double>& out) {
        for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + coef * (worst[j] - centroid[j]);
    };

    bool converged = false;
    while (evals < budget) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        {
            std::vector<std::vector<double>> s2(n + 1);
            std::vector<double> f2(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                s2[i] = simplex[order[i]];
                f2[i] = fv[order[i]];
            }
            simplex.swap(s2);
            fv.swap(f2);
        }

        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::abs(simplex[i][j] - simplex[0][j]));
            diameter = std::max(diameter, d);
        }
        if (diameter < opt.xtol) {
            converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);

        const auto& worst = simplex[n];
        point(-1.0, worst, xr);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            point(-2.0, worst, xe);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
            continue;
        }
        if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
            continue;
        }
        const bool outside = fr < fv[n];
        point(outside ? -0.5 : 0.5, worst, xc);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[n])) {
            simplex[n] = xc;
            fv[n] = fc;
            continue;
        }
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
            fv[i] = eval(simplex[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    return {simplex[best], fv[best], evals, converged};
}

}  // namespace detail

/// Derivative-free simplex minimization. Infinite objective values act as walls.
inline NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
    NelderMeadResult best = detail::nelder_mead_once(f, std::move(x0), opt.initial_step, opt, opt.max_evals);
    for (int r = 0; r < opt.polish_restarts && best.evals < opt.max_evals; ++r) {
        const double step = std::max(opt.initial_step * 1e-2, 100.0 * opt.xtol);
        auto next = detail::nelder_mead_once(f, best.x, step, opt, opt.max_evals - best.evals);
        next.evals += best.evals;
        if (next.value <= best.value) {
            best = next;
        } else {
            best.evals = next.evals;
        }
    }
    return best;
}

}  // namespace geoprobe
