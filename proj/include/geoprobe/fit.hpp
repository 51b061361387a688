#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "report.hpp"
#include "vec.hpp"

namespace geoprobe {

template <std::size_t N>
struct BallFit {
    Vec<N> center;
    double radius = 0.0;
    double rms_residual = 0.0;
    double max_residual = 0.0;
    int iterations = 0;

    LocusFit to_locus_fit() const {
        return {std::vector<double>(center.c.begin(), center.c.end()), radius, rms_residual, max_residual};
    }
};

/// Least-squares circle (N = 2) or sphere (N = 3) fit: an algebraic (Kasa) solve for the
/// starting point, refined by Gauss-Newton on the geometric residual |p - c| - r.
template <std::size_t N>
BallFit<N> fit_ball(const std::vector<Vec<N>>& pts, int max_iterations = 50) {
    constexpr int D = static_cast<int>(N);
    require(pts.size() >= N + 1, ErrorCode::InvalidInput, "not enough points to fit");

    Vec<N> mean{};
    for (const auto& p : pts) mean += p;
    mean /= static_cast<double>(pts.size());

    // Kasa: |q|^2 = 2 c.q + e, with q = p - mean.
    Eigen::MatrixXd a(static_cast<Eigen::Index>(pts.size()), D + 1);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec<N> q = pts[i] - mean;
        const auto row = static_cast<Eigen::Index>(i);
        for (int j = 0; j < D; ++j) a(row, j) = 2.0 * q[static_cast<std::size_t>(j)];
        a(row, D) = 1.0;
        rhs(row) = norm_sq(q);
    }
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
    Eigen::Matrix<double, D + 1, 1> x;
    double c_sq = 0.0;
    for (int j = 0; j < D; ++j) {
        x(j) = sol(j);
        c_sq += sol(j) * sol(j);
    }
    x(D) = std::sqrt(std::max(0.0, sol(D) + c_sq));

    BallFit<N> fit;
    for (int it = 0; it < max_iterations; ++it) {
        Eigen::Matrix<double, D + 1, D + 1> jtj = Eigen::Matrix<double, D + 1, D + 1>::Zero();
        Eigen::Matrix<double, D + 1, 1> jtr = Eigen::Matrix<double, D + 1, 1>::Zero();
        for (const auto& p : pts) {
            Eigen::Matrix<double, D, 1> q;
            for (int j = 0; j < D; ++j) q(j) = p[static_cast<std::size_t>(j)] - mean[static_cast<std::size_t>(j)] - x(j);
            const double len = q.norm();
            if (len == 0.0) continue;
            Eigen::Matrix<double, D + 1, 1> row;
            row.template head<D>() = -q / len;
            row(D) = -1.0;
            const double r = len - x(D);
            jtj.noalias() += row * row.transpose();
            jtr.noalias() += row * r;
        }
        const Eigen::Matrix<double, D + 1, 1> delta = jtj.ldlt().solve(-jtr);
        x += delta;
        fit.iterations = it + 1;
        if (!(delta.norm() > 1e-15 * std::max(1.0, x(D)))) break;
    }

    for (int j = 0; j < D; ++j) fit.center[static_cast<std::size_t>(j)] = mean[static_cast<std::size_t>(j)] + x(j);
    fit.radius = x(D);
    double ss = 0.0;
    for (const auto& p : pts) {
        const double r = std::abs(dist(p, fit.center) - fit.radius);
        ss += r * r;
        fit.max_residual = std::max(fit.max_residual, r);
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(pts.size()));
    return fit;
}

}  // namespace geoprobe
