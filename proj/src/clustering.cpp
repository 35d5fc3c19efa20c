#include "cam/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cam/errors.hpp"
#include "cam/geometry.hpp"
#include "cam/rng.hpp"

namespace cam {

double point_to_ray_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
    return (x - r.dot(x) * r).norm();
}

Eigen::VectorXd update_ray(const Eigen::MatrixXd& points, const std::vector<int>& member_indices) {
    if (member_indices.empty()) {
        throw validation_error("update_ray: sector has no members");
    }
    const auto m = points.rows();
    Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
    for (const int n : member_indices) {
        corr.noalias() += points.col(n) * points.col(n).transpose();
        mean += points.col(n);
    }
    mean /= static_cast<double>(member_indices.size());

    Eigen::VectorXd v = mean;
    if (v.norm() < 1e-300) {
        v = points.col(member_indices.front());
        for (const int n : member_indices) {
            if (points.col(n).norm() > 0.0) { v = points.col(n); break; }
        }
    }
    if (v.norm() == 0.0) {
        throw numerical_error("update_ray: degenerate sector, every member is the zero vector");
    }
    v.normalize();
    for (int it = 0; it < 1000; ++it) {
        Eigen::VectorXd next = corr * v;
        const double norm = next.norm();
        if (norm == 0.0) {
            throw numerical_error("update_ray: power iteration hit the null space");
        }
        next /= norm;
        const double step = angle(next, v);
        v = next;
        if (step < 1e-10) break;
    }
    if (v.dot(mean) < 0.0) v = -v;
    return v;
}

namespace {

struct RestartResult {
    Eigen::MatrixXd rays;
    std::vector<int> assignment;
    double distortion = std::numeric_limits<double>::infinity();
    std::vector<double> descent;
};

// One full Lloyd alternation from a random initialization.
RestartResult run_restart(const Eigen::MatrixXd& X, int J, Rng& rng,
                          const std::vector<int>& candidates,
                          const Eigen::VectorXd& col_norms2) {
    const auto n = static_cast<int>(X.cols());
    RestartResult res;
    res.rays.resize(X.rows(), J);
    const auto picks = rng.sample_without_replacement(static_cast<int>(candidates.size()), J);
    for (int j = 0; j < J; ++j) {
        res.rays.col(j) = X.col(candidates[static_cast<std::size_t>(picks[static_cast<std::size_t>(j)])]).normalized();
    }
    res.assignment.assign(static_cast<std::size_t>(n), 0);

    double prev = std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> members(static_cast<std::size_t>(J));
    for (int iter = 0; iter < 500; ++iter) {
        // Assignment: squared line distance ||x||^2 - (r.x)^2, nearest ray,
        // ties to the lowest sector index.
        Eigen::MatrixXd proj = res.rays.transpose() * X;  // J x N
        for (int p = 0; p < n; ++p) {
            int best_j = 0;
            double best_d = col_norms2[p] - proj(0, p) * proj(0, p);
            for (int j = 1; j < J; ++j) {
                const double d = col_norms2[p] - proj(j, p) * proj(j, p);
                if (d < best_d) { best_d = d; best_j = j; }
            }
            res.assignment[static_cast<std::size_t>(p)] = best_j;
        }
        // Empty-sector repair: hand the sector the point farthest from its
        // currently assigned ray, then steal that point.
        for (int j = 0; j < J; ++j) {
            bool empty = true;
            for (int p = 0; p < n; ++p) {
                if (res.assignment[static_cast<std::size_t>(p)] == j) { empty = false; break; }
            }
            if (!empty) continue;
            int star = -1;
            double far_d = -1.0;
            for (int p = 0; p < n; ++p) {
                const double dot = res.rays.col(res.assignment[static_cast<std::size_t>(p)]).dot(X.col(p));
                const double d2 = std::max(0.0, col_norms2[p] - dot * dot);
                if (d2 > far_d) { far_d = d2; star = p; }
            }
            res.rays.col(j) = X.col(star).normalized();
            res.assignment[static_cast<std::size_t>(star)] = j;
        }
        // Ray update.
        for (auto& mlist : members) mlist.clear();
        for (int p = 0; p < n; ++p) members[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(p)])].push_back(p);
        for (int j = 0; j < J; ++j) {
            if (!members[static_cast<std::size_t>(j)].empty()) {
                res.rays.col(j) = update_ray(X, members[static_cast<std::size_t>(j)]);
            }
        }
        // Distortion under the refreshed rays.
        proj = res.rays.transpose() * X;
        double d = 0.0;
        for (int p = 0; p < n; ++p) {
            const double dot = proj(res.assignment[static_cast<std::size_t>(p)], p);
            d += std::max(0.0, col_norms2[p] - dot * dot);
        }
        res.descent.push_back(d);
        if (std::abs(prev - d) <= 1e-12 * std::max(1.0, prev)) break;
        prev = d;
    }
    // The last refit moved the rays off the labeling that produced them, so
    // re-label once under the returned rays. This step never increases the
    // distortion, keeping the descent trace monotone.
    const Eigen::MatrixXd proj = res.rays.transpose() * X;
    double final_d = 0.0;
    for (int p = 0; p < n; ++p) {
        int best_j = 0;
        double best_d = col_norms2[p] - proj(0, p) * proj(0, p);
        for (int j = 1; j < J; ++j) {
            const double d2 = col_norms2[p] - proj(j, p) * proj(j, p);
            if (d2 < best_d) { best_d = d2; best_j = j; }
        }
        res.assignment[static_cast<std::size_t>(p)] = best_j;
        final_d += std::max(0.0, best_d);
    }
    res.descent.push_back(final_d);
    res.distortion = final_d;
    return res;
}

} // namespace

SectorModel fit_sectors(const Eigen::MatrixXd& X, int J, int restarts, std::uint64_t seed,
                        FitTrace* trace) {
    if (J < 1) throw validation_error("fit_sectors: J must be at least 1");
    if (restarts < 1) throw validation_error("fit_sectors: restarts must be at least 1");
    const auto n = static_cast<int>(X.cols());
    std::vector<int> candidates;
    for (int p = 0; p < n; ++p) {
        if (X.col(p).norm() > 0.0) candidates.push_back(p);
    }
    if (static_cast<int>(candidates.size()) < J) {
        throw validation_error("fit_sectors: need at least J = " + std::to_string(J) +
                               " nonzero data columns, have " + std::to_string(candidates.size()));
    }
    Eigen::VectorXd col_norms2(n);
    for (int p = 0; p < n; ++p) col_norms2[p] = X.col(p).squaredNorm();

    RestartResult best;
    int best_restart = -1;
    for (int t = 0; t < restarts; ++t) {
        Rng rng(derive_seed(seed, "restart", static_cast<std::uint64_t>(t)));
        RestartResult r = run_restart(X, J, rng, candidates, col_norms2);
        if (r.distortion < best.distortion) {
            best = std::move(r);
            best_restart = t;
        }
    }

    SectorModel model;
    model.rays = std::move(best.rays);
    model.assignment = std::move(best.assignment);
    model.sector_sizes.assign(static_cast<std::size_t>(J), 0);
    for (const int a : model.assignment) ++model.sector_sizes[static_cast<std::size_t>(a)];
    model.distortion = best.distortion;
    if (trace != nullptr) {
        trace->distortions = std::move(best.descent);
        trace->best_restart = best_restart;
    }
    return model;
}

int count_obtuse_assignments(const Eigen::MatrixXd& X, const SectorModel& model) {
    int count = 0;
    for (Eigen::Index p = 0; p < X.cols(); ++p) {
        const auto j = model.assignment[static_cast<std::size_t>(p)];
        if (angle(X.col(p), model.rays.col(j)) > std::numbers::pi / 2.0) ++count;
    }
    return count;
}

} // namespace cam
