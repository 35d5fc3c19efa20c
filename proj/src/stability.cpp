#include "cam/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cam/clustering.hpp"
#include "cam/edges.hpp"
#include "cam/errors.hpp"
#include "cam/geometry.hpp"
#include "cam/hungarian.hpp"
#include "cam/parallel.hpp"
#include "cam/rng.hpp"

namespace cam {

std::pair<double, std::vector<int>> min_avg_angle(const Eigen::MatrixXd& U,
                                                  const Eigen::MatrixXd& W) {
    if (U.rows() != W.rows() || U.cols() != W.cols()) {
        throw validation_error("min_avg_angle: matrices must have identical shape");
    }
    const auto k = U.cols();
    if (k < 1) throw validation_error("min_avg_angle: need at least one column");
    Eigen::MatrixXd cost(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            cost(i, j) = angle(U.col(i), W.col(j));
        }
    }
    const std::vector<int> phi = solve_assignment(cost);
    double total = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) total += cost(i, phi[static_cast<std::size_t>(i)]);
    return {total / static_cast<double>(k), phi};
}

std::vector<double> nmi_from_terms(const Eigen::MatrixXd& angles,
                                   const Eigen::MatrixXd& rand_a,
                                   const Eigen::MatrixXd& rand_b) {
    std::vector<double> out(static_cast<std::size_t>(angles.cols()),
                            std::numeric_limits<double>::quiet_NaN());
    for (Eigen::Index c = 0; c < angles.cols(); ++c) {
        double num = 0.0;
        double den = 0.0;
        bool any = false;
        for (Eigen::Index l = 0; l < angles.rows(); ++l) {
            if (std::isnan(angles(l, c))) continue;
            num += angles(l, c);
            den += rand_a(l, c) + rand_b(l, c);
            any = true;
        }
        if (any && den > 0.0) out[static_cast<std::size_t>(c)] = 2.0 * num / den;
        else if (any) out[static_cast<std::size_t>(c)] = 0.0;
    }
    return out;
}

namespace {

struct FoldPipeline {
    SectorModel model;
    EdgeSet edges;  // ray_indices refer to model.rays columns
};

FoldPipeline run_fold(const Eigen::MatrixXd& fold, const CamConfig& cfg, std::uint64_t seed) {
    FoldPipeline out;
    out.model = fit_sectors(fold, cfg.sectors, cfg.restarts, seed);
    const std::vector<int> kept = dedup_direction_indices(out.model.rays, cfg.dedup_tol);
    Eigen::MatrixXd deduped(out.model.rays.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) deduped.col(static_cast<Eigen::Index>(i)) = out.model.rays.col(kept[i]);
    EdgeSet local = detect_edges(deduped, cfg.tau);
    out.edges.tau = local.tau;
    for (const int e : local.ray_indices) out.edges.ray_indices.push_back(kept[static_cast<std::size_t>(e)]);
    return out;
}

long binomial_or_cap(int n, int k, long cap) {
    long result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > cap) return cap + 1;
    }
    return result;
}

Eigen::MatrixXd columns_of(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
    Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = m.col(idx[i]);
    return out;
}

} // namespace

StabilityProfile stability_select(const Eigen::MatrixXd& X, int k_max, int trials,
                                  const CamConfig& cfg, std::uint64_t seed) {
    if (k_max < 2) throw validation_error("stability_select: k_max must be at least 2");
    if (trials < 1) throw validation_error("stability_select: trials must be at least 1");
    if (k_max > cfg.sectors) {
        throw validation_error("stability_select: k_max = " + std::to_string(k_max) +
                               " exceeds the sector count J = " + std::to_string(cfg.sectors));
    }
    const auto n = static_cast<int>(X.cols());
    const int n1 = (n + 1) / 2;
    const int n2 = n - n1;
    if (n2 < cfg.sectors) {
        throw validation_error("stability_select: a fold would hold " + std::to_string(n2) +
                               " points, fewer than J = " + std::to_string(cfg.sectors) +
                               " sectors; lower the sector count or supply more data");
    }

    StabilityProfile profile;
    for (int k = 2; k <= k_max; ++k) profile.k_range.push_back(k);
    const auto kcount = static_cast<Eigen::Index>(profile.k_range.size());
    profile.trials = trials;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    profile.per_trial_angles = Eigen::MatrixXd::Constant(trials, kcount, nan);
    profile.per_trial_rand_a = Eigen::MatrixXd::Constant(trials, kcount, nan);
    profile.per_trial_rand_b = Eigen::MatrixXd::Constant(trials, kcount, nan);

    parallel_for(static_cast<std::size_t>(trials), cfg.threads, [&](std::size_t l) {
        const std::uint64_t strial = derive_seed(seed, "trial", l);
        Rng split_rng(derive_seed(strial, "split"));
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        split_rng.shuffle(perm);
        std::vector<int> idx1(perm.begin(), perm.begin() + n1);
        std::vector<int> idx2(perm.begin() + n1, perm.end());
        std::sort(idx1.begin(), idx1.end());
        std::sort(idx2.begin(), idx2.end());
        const Eigen::MatrixXd fold1 = columns_of(X, idx1);
        const Eigen::MatrixXd fold2 = columns_of(X, idx2);

        const FoldPipeline p1 = run_fold(fold1, cfg, derive_seed(strial, "fold", 0));
        const FoldPipeline p2 = run_fold(fold2, cfg, derive_seed(strial, "fold", 1));

        for (Eigen::Index c = 0; c < kcount; ++c) {
            const int k = profile.k_range[static_cast<std::size_t>(c)];
            if (static_cast<int>(p1.edges.ray_indices.size()) < k ||
                static_cast<int>(p2.edges.ray_indices.size()) < k) {
                warn("stability_select: trial " + std::to_string(l) + " detected fewer than K = " +
                     std::to_string(k) + " edges in a fold; skipping this (trial, K)");
                continue;
            }
            const bool bb1 = binomial_or_cap(static_cast<int>(p1.edges.ray_indices.size()), k,
                                             cfg.bb_threshold) > cfg.bb_threshold;
            const bool bb2 = binomial_or_cap(static_cast<int>(p2.edges.ray_indices.size()), k,
                                             cfg.bb_threshold) > cfg.bb_threshold;
            const MixingEstimate a1 = select_k_edges(p1.model, p1.edges, k, bb1);
            const MixingEstimate a2 = select_k_edges(p2.model, p2.edges, k, bb2);

            Rng rand_rng(derive_seed(strial, "rand", static_cast<std::uint64_t>(k)));
            const std::vector<int> r1 = rand_rng.sample_without_replacement(cfg.sectors, k);
            const std::vector<int> r2 = rand_rng.sample_without_replacement(cfg.sectors, k);
            const Eigen::MatrixXd rand1 = columns_of(p1.model.rays, r1);
            const Eigen::MatrixXd rand2 = columns_of(p2.model.rays, r2);

            profile.per_trial_angles(static_cast<Eigen::Index>(l), c) =
                min_avg_angle(a1.A_hat, a2.A_hat).first;
            profile.per_trial_rand_a(static_cast<Eigen::Index>(l), c) =
                min_avg_angle(a1.A_hat, rand2).first;
            profile.per_trial_rand_b(static_cast<Eigen::Index>(l), c) =
                min_avg_angle(rand1, a2.A_hat).first;
        }
    });

    profile.nmi = nmi_from_terms(profile.per_trial_angles, profile.per_trial_rand_a,
                                 profile.per_trial_rand_b);
    double best = std::numeric_limits<double>::infinity();
    profile.chosen_k = 0;
    for (std::size_t c = 0; c < profile.nmi.size(); ++c) {
        if (!std::isnan(profile.nmi[c]) && profile.nmi[c] < best) {
            best = profile.nmi[c];
            profile.chosen_k = profile.k_range[c];
        }
    }
    if (profile.chosen_k == 0) {
        throw numerical_error("stability_select: no K produced a valid instability value");
    }
    return profile;
}

} // namespace cam
