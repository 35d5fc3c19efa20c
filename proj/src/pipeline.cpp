#include "cam/pipeline.hpp"

#include <cmath>
#include <string>

#include "cam/clustering.hpp"
#include "cam/errors.hpp"
#include "cam/geometry.hpp"
#include "cam/rng.hpp"

namespace cam {

namespace {

long binomial_or_cap(int n, int k, long cap) {
    long result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > cap) return cap + 1;
    }
    return result;
}

void validate(const Eigen::MatrixXd& X, const CamConfig& cfg) {
    if (X.rows() < 2) throw validation_error("decompose: need at least 2 mixture rows");
    if (X.cols() < 2) throw validation_error("decompose: need at least 2 data columns");
    if (!X.allFinite()) throw validation_error("decompose: observation matrix has non-finite entries");
    if (cfg.sectors < 1) throw validation_error("decompose: sectors must be positive");
    if (cfg.restarts < 1) throw validation_error("decompose: restarts must be positive");
    if (cfg.tau < 0.0) throw validation_error("decompose: tau must be non-negative");
    if (cfg.dedup_tol < 0.0) throw validation_error("decompose: dedup_tol must be non-negative");
    if (cfg.k < 0) throw validation_error("decompose: k must be non-negative (0 = automatic)");
    if (cfg.k == 0 && cfg.k_max < 2) {
        throw validation_error("decompose: k_max must be at least 2 for automatic selection");
    }
}

} // namespace

DecomposeResult decompose(const Eigen::MatrixXd& X, const CamConfig& cfg) {
    validate(X, cfg);
    DecomposeResult res;

    auto [X_scaled, row_scales] = unit_sum_scale(X);
    res.row_scales = row_scales;
    auto [X_filtered, report] = filter_small_norms(X_scaled, cfg.remove_fraction);
    report.row_scales = row_scales;
    res.report = std::move(report);

    int K = cfg.k;
    if (K == 0) {
        res.stability = stability_select(X_filtered, cfg.k_max, cfg.trials, cfg,
                                         derive_seed(cfg.seed, "stability"));
        K = res.stability->chosen_k;
    }
    res.chosen_k = K;

    res.model = fit_sectors(X_filtered, cfg.sectors, cfg.restarts,
                            derive_seed(cfg.seed, "cluster"));
    const int obtuse = count_obtuse_assignments(X_filtered, res.model);
    if (obtuse > 0) {
        warn("decompose: " + std::to_string(obtuse) +
             " points sit at an obtuse angle to their sector ray; the sector count may be too low");
    }

    const std::vector<int> kept = dedup_direction_indices(res.model.rays, cfg.dedup_tol);
    Eigen::MatrixXd deduped(res.model.rays.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        deduped.col(static_cast<Eigen::Index>(i)) = res.model.rays.col(kept[i]);
    }
    const EdgeSet local = detect_edges(deduped, cfg.tau);
    res.edges.tau = local.tau;
    for (const int e : local.ray_indices) {
        res.edges.ray_indices.push_back(kept[static_cast<std::size_t>(e)]);
    }

    const bool use_bb = binomial_or_cap(static_cast<int>(res.edges.ray_indices.size()), K,
                                        cfg.bb_threshold) > cfg.bb_threshold;
    MixingEstimate scaled_mixing = select_k_edges(res.model, res.edges, K, use_bb);

    // Sources come from every column of the scaled data, not just the
    // filtered subset the geometry was estimated on.
    std::optional<SourceEstimate> scaled_sources;
    try {
        scaled_sources = recover_sources(X_scaled, scaled_mixing.A_hat);
    } catch (const numerical_error& e) {
        warn(std::string("decompose: ") + e.what() + "; emitting the mixing estimate only");
    }

    // Back to the original row scale. Column rescaling keeps A_hat * S_hat
    // invariant: whatever factor a column of A_hat absorbs, the matching
    // source row sheds.
    const Eigen::MatrixXd A_raw = row_scales.asDiagonal() * scaled_mixing.A_hat;
    Eigen::VectorXd col_factors(A_raw.cols());
    bool sums_positive = true;
    for (Eigen::Index k = 0; k < A_raw.cols(); ++k) {
        if (A_raw.col(k).sum() <= 0.0) { sums_positive = false; break; }
    }
    for (Eigen::Index k = 0; k < A_raw.cols(); ++k) {
        col_factors[k] = sums_positive ? A_raw.col(k).sum() : A_raw.col(k).norm();
    }
    res.mixing.selected_edges = scaled_mixing.selected_edges;
    res.mixing.fit_error = scaled_mixing.fit_error;
    res.mixing.A_hat = A_raw * col_factors.cwiseInverse().asDiagonal();
    if (scaled_sources) {
        SourceEstimate out;
        out.S_hat = col_factors.asDiagonal() * scaled_sources->S_hat;
        out.projected_X = row_scales.asDiagonal() * scaled_sources->projected_X;
        res.sources = std::move(out);
    }
    return res;
}

} // namespace cam
