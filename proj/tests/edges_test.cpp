#include "cam/edges.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "cam/datagen.hpp"
#include "cam/errors.hpp"
#include "cam/geometry.hpp"
#include "cam/metrics.hpp"
#include "cam/rng.hpp"
#include "cam/stability.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using cam::Rng;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd ray_matrix_2d(const std::vector<double>& angles_rad) {
    MatrixXd rays(2, static_cast<Eigen::Index>(angles_rad.size()));
    for (std::size_t j = 0; j < angles_rad.size(); ++j) {
        rays.col(static_cast<Eigen::Index>(j)) << std::cos(angles_rad[j]), std::sin(angles_rad[j]);
    }
    return rays;
}

cam::SectorModel model_from_rays(const MatrixXd& rays, const std::vector<int>& sizes) {
    cam::SectorModel m;
    m.rays = rays;
    m.sector_sizes = sizes;
    int n = 0;
    for (std::size_t j = 0; j < sizes.size(); ++j) {
        for (int c = 0; c < sizes[j]; ++c) m.assignment.push_back(static_cast<int>(j));
        n += sizes[j];
    }
    (void)n;
    return m;
}

// Same weighted error as the library, recomputed from first principles.
double fitting_error_reference(const cam::SectorModel& model, const std::vector<int>& candidate) {
    MatrixXd basis(model.rays.rows(), static_cast<Eigen::Index>(candidate.size()));
    for (std::size_t c = 0; c < candidate.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = model.rays.col(candidate[c]);
    double total = 0.0;
    for (int j = 0; j < model.rays.cols(); ++j) {
        if (std::find(candidate.begin(), candidate.end(), j) != candidate.end()) continue;
        if (model.sector_sizes[static_cast<std::size_t>(j)] == 0) continue;
        cam::Projection p = cam::project_onto_cone(model.rays.col(j), basis);
        total += model.sector_sizes[static_cast<std::size_t>(j)] * p.angle;
    }
    return total;
}

} // namespace

TEST(DetectEdges, InteriorRayRemovedInPlane) {
    // 0 and 60 degrees span a cone containing the 30 degree ray.
    MatrixXd rays = ray_matrix_2d({0.0, std::numbers::pi / 6, std::numbers::pi / 3});
    cam::EdgeSet e = cam::detect_edges(rays, 1e-3);
    std::vector<int> want = {0, 2};
    EXPECT_EQ(e.ray_indices, want);
    EXPECT_DOUBLE_EQ(e.tau, 1e-3);
    // the removed ray really is a non-negative combination of the extremes
    MatrixXd extremes(2, 2);
    extremes.col(0) = rays.col(0);
    extremes.col(1) = rays.col(2);
    VectorXd coef = cam::nnls(extremes, rays.col(1));
    EXPECT_GE(coef.minCoeff(), 0.0);
    EXPECT_LT((extremes * coef - rays.col(1)).norm(), 1e-9);
}

TEST(DetectEdges, SingleRaySurvives) {
    MatrixXd rays = ray_matrix_2d({0.7});
    cam::EdgeSet e = cam::detect_edges(rays, 1e-3);
    ASSERT_EQ(e.ray_indices.size(), 1u);
    EXPECT_EQ(e.ray_indices[0], 0);
}

TEST(DetectEdges, AllExtremeRaysSurvive) {
    // In 3-space, three linearly independent directions admit no removal.
    MatrixXd rays(3, 3);
    rays.col(0) << 1, 0, 0;
    rays.col(1) << 0, 1, 0;
    rays.col(2) << 0, 0, 1;
    cam::EdgeSet e = cam::detect_edges(rays, 1e-3);
    EXPECT_EQ(e.ray_indices.size(), 3u);
}

TEST(DetectEdges, SurvivorsFailMembershipAgainstEachOther) {
    Rng rng(101);
    for (int t = 0; t < 10; ++t) {
        MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(3, 8, rng, 0.05, 1.0));
        double tau = 1e-3;
        cam::EdgeSet e = cam::detect_edges(rays, tau);
        ASSERT_GE(e.ray_indices.size(), 1u);
        if (e.ray_indices.size() < 2) continue;
        MatrixXd kept(3, static_cast<Eigen::Index>(e.ray_indices.size()));
        for (std::size_t i = 0; i < e.ray_indices.size(); ++i) kept.col(static_cast<Eigen::Index>(i)) = rays.col(e.ray_indices[i]);
        // every survivor sits strictly outside the cone of the other survivors
        for (std::size_t i = 0; i < e.ray_indices.size(); ++i) {
            MatrixXd others(3, kept.cols() - 1);
            int c = 0;
            for (Eigen::Index k = 0; k < kept.cols(); ++k) {
                if (k != static_cast<Eigen::Index>(i)) others.col(c++) = kept.col(k);
            }
            EXPECT_GT(cam::project_onto_cone(kept.col(static_cast<Eigen::Index>(i)), others).angle, tau);
        }
    }
}

TEST(DetectEdges, RemovedRaysSitInsideSurvivorCone) {
    // Three extreme directions with interior rays planted well inside their
    // cone; the scan must drop exactly the interior rays, and post hoc each
    // dropped ray projects onto the survivor cone with angle <= tau.
    MatrixXd ext(3, 3);
    ext.col(0) << 1, 0.1, 0.1;
    ext.col(1) << 0.1, 1, 0.1;
    ext.col(2) << 0.1, 0.1, 1;
    MatrixXd rays(3, 7);
    rays.col(0) = (0.4 * ext.col(0) + 0.3 * ext.col(1) + 0.3 * ext.col(2));
    rays.col(1) = ext.col(0);
    rays.col(2) = (0.2 * ext.col(0) + 0.6 * ext.col(1) + 0.2 * ext.col(2));
    rays.col(3) = ext.col(1);
    rays.col(4) = (0.25 * ext.col(0) + 0.25 * ext.col(1) + 0.5 * ext.col(2));
    rays.col(5) = ext.col(2);
    rays.col(6) = (0.5 * ext.col(0) + 0.2 * ext.col(1) + 0.3 * ext.col(2));
    rays = testutil::normalize_columns(rays);
    double tau = 1e-3;
    cam::EdgeSet e = cam::detect_edges(rays, tau);
    std::vector<int> want = {1, 3, 5};
    ASSERT_EQ(e.ray_indices, want);
    MatrixXd kept(3, 3);
    for (int i = 0; i < 3; ++i) kept.col(i) = rays.col(want[static_cast<std::size_t>(i)]);
    for (int j : {0, 2, 4, 6}) {
        EXPECT_LE(cam::project_onto_cone(rays.col(j), kept).angle, tau);
    }
}

TEST(DetectEdges, InvariantToPositiveRescaling) {
    Rng rng(102);
    MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(3, 6, rng, 0.05, 1.0));
    cam::EdgeSet base = cam::detect_edges(rays, 1e-3);
    MatrixXd scaled = rays;
    for (int j = 0; j < scaled.cols(); ++j) scaled.col(j) *= rng.uniform(0.5, 4.0);
    cam::EdgeSet after = cam::detect_edges(scaled, 1e-3);
    EXPECT_EQ(base.ray_indices, after.ray_indices);
}

TEST(DetectEdges, NoiseFreeMixtureRecoversMixingDirections) {
    Rng seeds(103);
    for (int t = 0; t < 5; ++t) {
        std::uint64_t s = seeds.next_u64();
        MatrixXd A = cam::gen_random_mixing(3, 3, cam::MixingScenario::exact, s);
        MatrixXd S = cam::gen_sources_with_wgp(3, 40, cam::derive_seed(s, "sources"));
        MatrixXd X = A * S;
        MatrixXd Xn = testutil::normalize_columns(X);
        MatrixXd dedup = cam::dedup_directions(Xn, 1e-6);
        cam::EdgeSet e = cam::detect_edges(testutil::normalize_columns(dedup), 1e-3);
        ASSERT_EQ(e.ray_indices.size(), 3u) << "trial " << t;
        MatrixXd found(3, 3);
        for (int i = 0; i < 3; ++i) found.col(i) = dedup.col(e.ray_indices[static_cast<std::size_t>(i)]);
        auto [rad, perm] = cam::min_avg_angle(A, found);
        (void)perm;
        EXPECT_LT(rad, 1e-6) << "trial " << t;
    }
}

TEST(DetectEdges, MixedSignMixingStillIdentified) {
    Rng seeds(104);
    for (int t = 0; t < 5; ++t) {
        std::uint64_t s = seeds.next_u64();
        MatrixXd A = cam::gen_random_mixing(3, 3, cam::MixingScenario::exact, s, true);
        MatrixXd S = cam::gen_sources_with_wgp(3, 40, cam::derive_seed(s, "sources"));
        MatrixXd X = A * S;
        MatrixXd dedup = cam::dedup_directions(testutil::normalize_columns(X), 1e-6);
        cam::EdgeSet e = cam::detect_edges(testutil::normalize_columns(dedup), 1e-3);
        ASSERT_EQ(e.ray_indices.size(), 3u) << "trial " << t;
        MatrixXd found(3, 3);
        for (int i = 0; i < 3; ++i) found.col(i) = dedup.col(e.ray_indices[static_cast<std::size_t>(i)]);
        auto [rad, perm] = cam::min_avg_angle(A, found);
        (void)perm;
        EXPECT_LT(rad, 1e-6) << "trial " << t;
    }
}

TEST(DetectEdges, ColumnOrderDoesNotChangeSurvivorDirections) {
    Rng rng(105);
    MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(3, 7, rng, 0.05, 1.0));
    cam::EdgeSet fwd = cam::detect_edges(rays, 1e-3);
    MatrixXd rev(3, 7);
    for (int j = 0; j < 7; ++j) rev.col(j) = rays.col(6 - j);
    cam::EdgeSet bwd = cam::detect_edges(rev, 1e-3);
    std::set<int> fwd_set(fwd.ray_indices.begin(), fwd.ray_indices.end());
    std::set<int> bwd_mapped;
    for (int j : bwd.ray_indices) bwd_mapped.insert(6 - j);
    EXPECT_EQ(fwd_set, bwd_mapped);
}

TEST(FittingError, MatchesReferenceComputation) {
    Rng rng(110);
    for (int t = 0; t < 20; ++t) {
        MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(3, 6, rng, 0.05, 1.0));
        std::vector<int> sizes = {5, 10, 0, 7, 3, 8};
        cam::SectorModel m = model_from_rays(rays, sizes);
        std::vector<int> cand = {0, 3};
        EXPECT_NEAR(cam::edge_fitting_error(m, cand), fitting_error_reference(m, cand), 1e-12);
    }
}

TEST(FittingError, GeneratorsContributeZero) {
    Rng rng(111);
    MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(3, 4, rng, 0.05, 1.0));
    cam::SectorModel m = model_from_rays(rays, {5, 5, 5, 5});
    std::vector<int> all = {0, 1, 2, 3};
    EXPECT_DOUBLE_EQ(cam::edge_fitting_error(m, all), 0.0);
}

TEST(FittingError, NeverIncreasesWhenGeneratorsAreAdded) {
    Rng rng(112);
    for (int t = 0; t < 100; ++t) {
        int j = 5 + static_cast<int>(rng.uniform_below(4));
        MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(3, j, rng, 0.05, 1.0));
        std::vector<int> sizes;
        for (int i = 0; i < j; ++i) sizes.push_back(1 + static_cast<int>(rng.uniform_below(20)));
        cam::SectorModel m = model_from_rays(rays, sizes);
        // nested pair: subset strictly inside superset
        std::vector<int> superset, subset;
        for (int i = 0; i < j; ++i) {
            if (rng.uniform01() < 0.5) superset.push_back(i);
        }
        if (superset.size() < 2) superset = {0, 1};
        for (int idx : superset) {
            if (rng.uniform01() < 0.6) subset.push_back(idx);
        }
        if (subset.empty()) subset.push_back(superset.front());
        double f_small = cam::edge_fitting_error(m, subset);
        double f_big = cam::edge_fitting_error(m, superset);
        EXPECT_GE(f_small, f_big - 1e-12) << "trial " << t;
    }
}

TEST(SelectKEdges, AllCandidatesWhenCountsMatch) {
    Rng rng(120);
    MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(3, 5, rng, 0.05, 1.0));
    cam::SectorModel m = model_from_rays(rays, {4, 4, 4, 4, 4});
    cam::EdgeSet e;
    e.ray_indices = {0, 2, 4};
    cam::MixingEstimate est = cam::select_k_edges(m, e, 3, false);
    EXPECT_EQ(est.selected_edges, e.ray_indices);
    EXPECT_NEAR(est.fit_error, cam::edge_fitting_error(m, e.ray_indices), 1e-12);
}

TEST(SelectKEdges, BranchAndBoundMatchesExhaustive) {
    Rng rng(121);
    for (int t = 0; t < 30; ++t) {
        int j = 8 + static_cast<int>(rng.uniform_below(5));  // 8..12 sectors
        int jstar = 5 + static_cast<int>(rng.uniform_below(6));  // 5..10 candidate edges
        jstar = std::min(jstar, j);
        MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(4, j, rng, 0.05, 1.0));
        std::vector<int> sizes;
        for (int i = 0; i < j; ++i) sizes.push_back(1 + static_cast<int>(rng.uniform_below(30)));
        cam::SectorModel m = model_from_rays(rays, sizes);
        cam::EdgeSet e;
        std::vector<int> pool = Rng(rng.next_u64()).sample_without_replacement(j, jstar);
        std::sort(pool.begin(), pool.end());
        e.ray_indices = pool;
        int k = 2 + static_cast<int>(rng.uniform_below(3));  // 2..4
        k = std::min(k, jstar);
        cam::MixingEstimate ex = cam::select_k_edges(m, e, k, false);
        cam::MixingEstimate bb = cam::select_k_edges(m, e, k, true);
        EXPECT_EQ(ex.selected_edges, bb.selected_edges) << "trial " << t;
        EXPECT_DOUBLE_EQ(ex.fit_error, bb.fit_error);
        EXPECT_TRUE(ex.A_hat == bb.A_hat);
    }
}

TEST(SelectKEdges, ExhaustiveBeatsEveryOtherSubset) {
    Rng rng(122);
    MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(3, 7, rng, 0.05, 1.0));
    std::vector<int> sizes = {9, 8, 7, 6, 5, 4, 3};
    cam::SectorModel m = model_from_rays(rays, sizes);
    cam::EdgeSet e;
    e.ray_indices = {0, 1, 2, 3, 4, 5, 6};
    cam::MixingEstimate est = cam::select_k_edges(m, e, 3, false);
    for (const auto& subset : oracle::subsets_of_size(7, 3)) {
        EXPECT_LE(est.fit_error, cam::edge_fitting_error(m, subset) + 1e-12);
    }
}

TEST(SelectKEdges, TooLargeKExplainsRecourse) {
    MatrixXd rays = ray_matrix_2d({0.0, 1.0});
    cam::SectorModel m = model_from_rays(rays, {3, 3});
    cam::EdgeSet e;
    e.ray_indices = {0, 1};
    try {
        cam::select_k_edges(m, e, 3, false);
        FAIL() << "expected validation_error";
    } catch (const cam::validation_error& err) {
        std::string msg = err.what();
        EXPECT_NE(msg.find("tau"), std::string::npos);
    }
}

TEST(SelectKEdges, NonNegativeSelectionGetsUnitColumnSums) {
    Rng rng(123);
    MatrixXd rays = testutil::normalize_columns(testutil::random_matrix(3, 5, rng, 0.05, 1.0));
    cam::SectorModel m = model_from_rays(rays, {6, 6, 6, 6, 6});
    cam::EdgeSet e;
    e.ray_indices = {0, 1, 2, 3, 4};
    cam::MixingEstimate est = cam::select_k_edges(m, e, 3, false);
    for (int c = 0; c < est.A_hat.cols(); ++c) EXPECT_NEAR(est.A_hat.col(c).sum(), 1.0, 1e-12);
    // scaling preserves the selected directions
    for (int c = 0; c < 3; ++c) {
        EXPECT_LT(cam::angle(est.A_hat.col(c), m.rays.col(est.selected_edges[static_cast<std::size_t>(c)])), 1e-12);
    }
}

TEST(SelectKEdges, MixedSignSelectionKeepsUnitNorm) {
    MatrixXd rays(2, 3);
    rays.col(0) << 1, 0;
    rays.col(1) << 0.6, -0.8;  // negative column sum is possible
    rays.col(2) << 0, 1;
    cam::SectorModel m = model_from_rays(rays, {4, 4, 4});
    cam::EdgeSet e;
    e.ray_indices = {0, 1, 2};
    cam::MixingEstimate est = cam::select_k_edges(m, e, 2, false);
    for (int c = 0; c < est.A_hat.cols(); ++c) EXPECT_NEAR(est.A_hat.col(c).norm(), 1.0, 1e-12);
}

TEST(RecoverSources, NoiseFreeFactorizationIsExact) {
    Rng seeds(130);
    MatrixXd A = cam::gen_random_mixing(3, 3, cam::MixingScenario::exact, seeds.next_u64());
    MatrixXd S = cam::gen_correlated_sources(3, 50, 9);
    MatrixXd X = A * S;
    cam::SourceEstimate est = cam::recover_sources(X, A);
    EXPECT_LT((est.S_hat - S).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_LT((est.projected_X - X).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(RecoverSources, InteriorColumnsMatchUnconstrainedLeastSquares) {
    Rng seeds(131);
    MatrixXd A = cam::gen_random_mixing(4, 3, cam::MixingScenario::over, seeds.next_u64());
    MatrixXd S = cam::gen_mixed_sources(3, 20, 0.2, 11);
    MatrixXd X = A * S;  // interior: all coefficients strictly positive
    cam::SourceEstimate est = cam::recover_sources(X, A);
    MatrixXd pinv_sol = (A.transpose() * A).ldlt().solve(A.transpose() * X);
    EXPECT_LT((est.S_hat - pinv_sol).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(RecoverSources, NeverBeatenByRandomFeasiblePoints) {
    Rng rng(132);
    MatrixXd A = cam::gen_random_mixing(3, 3, cam::MixingScenario::exact, 77);
    MatrixXd X = testutil::random_matrix(3, 5, rng, -0.5, 1.0);
    cam::SourceEstimate est = cam::recover_sources(X, A);
    EXPECT_GE(est.S_hat.minCoeff(), 0.0);
    double opt = (A * est.S_hat - X).squaredNorm();
    for (int t = 0; t < 100; ++t) {
        MatrixXd cand = testutil::random_matrix(3, 5, rng, 0.0, 2.0);
        EXPECT_GE((A * cand - X).squaredNorm(), opt - 1e-9);
    }
}

TEST(RecoverSources, RankDeficientThrows) {
    MatrixXd A(3, 2);
    A.col(0) << 1, 1, 0;
    A.col(1) << 2, 2, 0;  // duplicate direction
    MatrixXd X = MatrixXd::Ones(3, 4);
    try {
        cam::recover_sources(X, A);
        FAIL() << "expected numerical_error";
    } catch (const cam::numerical_error& e) {
        EXPECT_NE(std::string(e.what()).find("recover"), std::string::npos);
    }
    MatrixXd wide(2, 3);  // more sources than mixtures
    wide << 1, 0, 0.5, 0, 1, 0.5;
    EXPECT_THROW(cam::recover_sources(MatrixXd::Ones(2, 4), wide), cam::numerical_error);
}

TEST(RecoverSources, IllConditionedWarnsButProceeds) {
    testutil::WarnCapture capture;
    MatrixXd A(3, 2);
    A.col(0) << 1.0, 1.0, 1.0;
    A.col(1) << 1.0, 1.0, 1.0 + 1e-9;
    MatrixXd X = MatrixXd::Ones(3, 2);
    cam::SourceEstimate est = cam::recover_sources(X, A);
    EXPECT_EQ(est.S_hat.rows(), 2);
    EXPECT_TRUE(testutil::any_warning_contains("condition"));
}

TEST(GammaNormalize, NonNegativeCaseUsesOnesAndUnitColumnSums) {
    Rng seeds(140);
    MatrixXd A = cam::gen_random_mixing(3, 3, cam::MixingScenario::exact, seeds.next_u64());
    MatrixXd S = cam::gen_mixed_sources(3, 25, 0.1, 3);
    MatrixXd X = A * S;
    cam::GammaNormalization g = cam::gamma_normalize(X, A);
    EXPECT_TRUE(g.gamma.isApprox(Eigen::VectorXd::Ones(3), 0.0));
    EXPECT_EQ(g.kept_columns.size(), 25u);
    for (int n = 0; n < g.X_tilde.cols(); ++n) EXPECT_NEAR(g.gamma.dot(g.X_tilde.col(n)), 1.0, 1e-12);
    for (int k = 0; k < g.A_tilde.cols(); ++k) EXPECT_NEAR(g.gamma.dot(g.A_tilde.col(k)), 1.0, 1e-12);
}

TEST(GammaNormalize, NormalizedSourcesSumToOne) {
    // With X = A S and every column scaled by gamma.x, the normalized source
    // weights (gamma.a_k) s_kn / (gamma.x_n) must sum to one per column.
    Rng seeds(141);
    MatrixXd A = cam::gen_random_mixing(3, 3, cam::MixingScenario::exact, seeds.next_u64());
    MatrixXd S = cam::gen_mixed_sources(3, 30, 0.05, 5);
    MatrixXd X = A * S;
    cam::GammaNormalization g = cam::gamma_normalize(X, A);
    for (int n = 0; n < 30; ++n) {
        double total = 0.0;
        for (int k = 0; k < 3; ++k) total += g.edge_scales[k] * S(k, n) / g.point_scales[n];
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(GammaNormalize, MixedSignMixingFallsBackToComputedGamma) {
    MatrixXd A(3, 2);
    A.col(0) << 0.9, -0.4, 0.5;   // sums to 1.0
    A.col(1) << -0.6, 0.35, 0.2;  // sums to -0.05: the all-ones gamma fails
    MatrixXd S = cam::gen_mixed_sources(2, 20, 0.2, 6);
    MatrixXd X = A * S;
    cam::GammaNormalization g = cam::gamma_normalize(X, A);
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(g.gamma.dot(A.col(k)), 1.0, 1e-9);
    for (std::size_t i = 0; i < g.kept_columns.size(); ++i) {
        EXPECT_GT(g.point_scales[static_cast<Eigen::Index>(i)], 0.0);
    }
}

TEST(GammaNormalize, DropsNonPositiveColumnsWithWarning) {
    testutil::WarnCapture capture;
    MatrixXd A = MatrixXd::Identity(2, 2);
    MatrixXd X(2, 3);
    X.col(0) << 1, 1;
    X.col(1) << -1, -1;  // gamma.x < 0, must be dropped
    X.col(2) << 2, 0.5;
    cam::GammaNormalization g = cam::gamma_normalize(X, A);
    std::vector<int> want = {0, 2};
    EXPECT_EQ(g.kept_columns, want);
    EXPECT_TRUE(testutil::any_warning_contains("dropp"));
}

TEST(MaxDominance, PlantedPureColumnsWin) {
    MatrixXd s_tilde(3, 6);
    s_tilde << 1.0, 0.0, 0.0, 0.5, 0.4, 0.3,
               0.0, 1.0, 0.0, 0.3, 0.4, 0.3,
               0.0, 0.0, 1.0, 0.2, 0.2, 0.4;
    std::vector<int> idx = cam::max_dominance_indices(s_tilde);
    std::vector<int> want = {0, 1, 2};
    EXPECT_EQ(idx, want);
}

TEST(MaxDominance, TieGoesToLowestColumn) {
    MatrixXd s_tilde(2, 3);
    s_tilde << 0.6, 0.6, 0.2,
               0.4, 0.4, 0.8;
    std::vector<int> idx = cam::max_dominance_indices(s_tilde);
    EXPECT_EQ(idx[0], 0);
    EXPECT_EQ(idx[1], 2);
}

TEST(Markers, TopOneAgreesWithDominanceOnNormalizedInput) {
    Rng rng(150);
    MatrixXd s = testutil::random_matrix(3, 12, rng, 0.0, 1.0);
    for (int n = 0; n < 12; ++n) s.col(n) /= s.col(n).sum();  // column sums 1
    std::vector<std::vector<int>> markers = cam::select_marker_points(s, 1);
    std::vector<int> dom = cam::max_dominance_indices(s);
    ASSERT_EQ(markers.size(), 3u);
    for (int k = 0; k < 3; ++k) {
        ASSERT_EQ(markers[static_cast<std::size_t>(k)].size(), 1u);
        EXPECT_EQ(markers[static_cast<std::size_t>(k)][0], dom[static_cast<std::size_t>(k)]);
    }
}

TEST(Markers, OrderedByDominanceRatio) {
    Rng rng(151);
    MatrixXd s = testutil::random_matrix(3, 20, rng, 0.01, 1.0);
    std::vector<std::vector<int>> markers = cam::select_marker_points(s, 5);
    for (int k = 0; k < 3; ++k) {
        const auto& list = markers[static_cast<std::size_t>(k)];
        ASSERT_EQ(list.size(), 5u);
        auto ratio = [&](int n) { return s(k, n) / s.col(n).sum(); };
        for (std::size_t i = 1; i < list.size(); ++i) {
            EXPECT_GE(ratio(list[i - 1]), ratio(list[i]) - 1e-15);
        }
        // nothing outside the list has a strictly larger ratio than the last member
        double cutoff = ratio(list.back());
        int better = 0;
        for (int n = 0; n < 20; ++n) {
            if (std::find(list.begin(), list.end(), n) == list.end() && ratio(n) > cutoff + 1e-15) ++better;
        }
        EXPECT_EQ(better, 0);
    }
}

TEST(Markers, OversizedRequestTruncatesWithWarning) {
    testutil::WarnCapture capture;
    MatrixXd s = MatrixXd::Ones(2, 4);
    std::vector<std::vector<int>> markers = cam::select_marker_points(s, 9);
    EXPECT_EQ(markers[0].size(), 4u);
    EXPECT_TRUE(testutil::any_warning_contains("truncat"));
}

TEST(ConeMembership, NoiseFreeDataLiesInSurvivorCone) {
    Rng seeds(160);
    MatrixXd A = cam::gen_random_mixing(3, 3, cam::MixingScenario::exact, seeds.next_u64(), true);
    MatrixXd S = cam::gen_sources_with_wgp(3, 60, 8);
    MatrixXd X = A * S;
    MatrixXd dedup = cam::dedup_directions(testutil::normalize_columns(X), 1e-6);
    cam::EdgeSet e = cam::detect_edges(testutil::normalize_columns(dedup), 1e-3);
    MatrixXd kept(3, static_cast<Eigen::Index>(e.ray_indices.size()));
    for (std::size_t i = 0; i < e.ray_indices.size(); ++i) kept.col(static_cast<Eigen::Index>(i)) = dedup.col(e.ray_indices[i]);
    for (int n = 0; n < X.cols(); ++n) {
        EXPECT_LT(cam::project_onto_cone(X.col(n), kept).angle, 1e-6);
    }
}
