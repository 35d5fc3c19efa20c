#include "cam/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cam/datagen.hpp"
#include "cam/errors.hpp"
#include "cam/metrics.hpp"
#include "cam/rng.hpp"
#include "test_util.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(Decompose, ToyDatasetRecoversMixingAndSources) {
    cam::ToyData toy = cam::gen_toy(cam::ToySpec{}, 6);
    cam::CamConfig cfg;
    cfg.k = 3;
    cfg.restarts = 10;
    cfg.seed = 106;
    cam::DecomposeResult res = cam::decompose(toy.X, cfg);
    ASSERT_EQ(res.mixing.A_hat.cols(), 3);
    ASSERT_TRUE(res.sources.has_value());
    cam::EvalResult ev = cam::eval_mixing(toy.A_true, res.mixing.A_hat);
    EXPECT_GE(ev.E_A, 0.90);
    EXPECT_GE(cam::eval_sources(toy.S_true, res.sources->S_hat, ev.pairing), 0.80);
    EXPECT_EQ(res.chosen_k, 3);
    EXPECT_FALSE(res.stability.has_value());
    EXPECT_EQ(res.report.removed_count, 800);
}

TEST(Decompose, OutputsLiveInTheOriginalDataScale) {
    cam::ToyData toy = cam::gen_toy(cam::ToySpec{.n_points = 600}, 8);
    cam::CamConfig cfg;
    cfg.k = 3;
    cfg.sectors = 16;
    cfg.restarts = 6;
    cfg.seed = 2;
    cam::DecomposeResult res = cam::decompose(toy.X, cfg);
    ASSERT_TRUE(res.sources.has_value());
    // factorization identity holds exactly as published
    MatrixXd rebuilt = res.mixing.A_hat * res.sources->S_hat;
    EXPECT_LT((rebuilt - res.sources->projected_X).lpNorm<Eigen::Infinity>(),
              1e-8 * std::max(1.0, res.sources->projected_X.lpNorm<Eigen::Infinity>()));
    // the projection approximates the raw input, not the scaled one
    double rel = (res.sources->projected_X - toy.X).norm() / toy.X.norm();
    EXPECT_LT(rel, 0.5);
    // non-negative estimate with the unit-column-sum convention
    EXPECT_GE(res.sources->S_hat.minCoeff(), 0.0);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(res.mixing.A_hat.col(k).sum(), 1.0, 1e-9);
    // row scales recorded for the caller
    ASSERT_EQ(res.row_scales.size(), 3);
    EXPECT_GT(res.row_scales.minCoeff(), 0.0);
}

TEST(Decompose, DeterministicForFixedConfig) {
    cam::ToyData toy = cam::gen_toy(cam::ToySpec{.n_points = 400}, 10);
    cam::CamConfig cfg;
    cfg.k = 3;
    cfg.sectors = 12;
    cfg.restarts = 5;
    cfg.seed = 77;
    cam::DecomposeResult a = cam::decompose(toy.X, cfg);
    cam::DecomposeResult b = cam::decompose(toy.X, cfg);
    EXPECT_TRUE(a.mixing.A_hat == b.mixing.A_hat);
    ASSERT_TRUE(a.sources.has_value() && b.sources.has_value());
    EXPECT_TRUE(a.sources->S_hat == b.sources->S_hat);
    EXPECT_EQ(a.model.distortion, b.model.distortion);
    EXPECT_EQ(a.edges.ray_indices, b.edges.ray_indices);
}

TEST(Decompose, AutomaticOrderSelectionFillsProfile) {
    cam::ToyData toy = cam::gen_toy(cam::ToySpec{.n_points = 400}, 12);
    cam::CamConfig cfg;
    cfg.k = 0;
    cfg.k_max = 4;
    cfg.trials = 6;
    cfg.sectors = 12;
    cfg.restarts = 5;
    cfg.seed = 3;
    cam::DecomposeResult res = cam::decompose(toy.X, cfg);
    ASSERT_TRUE(res.stability.has_value());
    EXPECT_EQ(res.chosen_k, res.stability->chosen_k);
    EXPECT_GE(res.chosen_k, 2);
    EXPECT_LE(res.chosen_k, 4);
    EXPECT_EQ(res.mixing.A_hat.cols(), res.chosen_k);
    std::vector<int> want_range = {2, 3, 4};
    EXPECT_EQ(res.stability->k_range, want_range);
}

TEST(Decompose, UnderDeterminedMixtureOmitsSources) {
    testutil::WarnCapture capture;
    MatrixXd a = cam::gen_random_mixing(3, 4, cam::MixingScenario::under, 30);
    MatrixXd s = cam::gen_sources_with_wgp(4, 300, 31);
    MatrixXd x = cam::mix(s, a, cam::NoiseSpec{});
    cam::CamConfig cfg;
    cfg.k = 4;
    cfg.sectors = 20;
    cfg.restarts = 8;
    cfg.remove_fraction = 0.0;
    cfg.seed = 5;
    cam::DecomposeResult res = cam::decompose(x, cfg);
    EXPECT_EQ(res.mixing.A_hat.rows(), 3);
    EXPECT_EQ(res.mixing.A_hat.cols(), 4);
    EXPECT_FALSE(res.sources.has_value());
    EXPECT_TRUE(testutil::any_warning_contains("rank-deficient"));
}

TEST(Decompose, OversizedTauLeavesTooFewEdges) {
    cam::ToyData toy = cam::gen_toy(cam::ToySpec{.n_points = 400}, 14);
    cam::CamConfig cfg;
    cfg.k = 3;
    cfg.sectors = 12;
    cfg.restarts = 4;
    cfg.tau = 2.0;  // removes every ray but the last survivor
    try {
        cam::decompose(toy.X, cfg);
        FAIL() << "expected validation_error";
    } catch (const cam::validation_error& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("tau"), std::string::npos);
    }
}

TEST(Decompose, RejectsUnusableInputs) {
    cam::CamConfig cfg;
    cfg.k = 2;
    EXPECT_THROW(cam::decompose(MatrixXd::Ones(1, 10), cfg), cam::validation_error);
    EXPECT_THROW(cam::decompose(MatrixXd::Ones(3, 1), cfg), cam::validation_error);
    MatrixXd bad = MatrixXd::Ones(3, 10);
    bad(1, 4) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(cam::decompose(bad, cfg), cam::validation_error);
    MatrixXd negative_row = MatrixXd::Ones(3, 10);
    negative_row.row(2).setConstant(-1.0);  // non-positive row sum
    EXPECT_THROW(cam::decompose(negative_row, cfg), cam::validation_error);
    cam::CamConfig bad_cfg;
    bad_cfg.k = -1;
    EXPECT_THROW(cam::decompose(MatrixXd::Ones(3, 10), bad_cfg), cam::validation_error);
}
