#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "cam/config.hpp"

namespace cam {

// Minimum average angle between the columns of U and W over all pairings,
// solved exactly as a linear assignment. Returns the angle in radians and
// the minimizing permutation phi, where phi[i] is the W column paired with
// U column i.
std::pair<double, std::vector<int>> min_avg_angle(const Eigen::MatrixXd& U,
                                                  const Eigen::MatrixXd& W);

// Everything needed to audit one stability run. Matrices are trials x |k_range|;
// entries are NaN for (trial, K) combinations where a fold produced fewer
// than K edges.
struct StabilityProfile {
    std::vector<int> k_range;
    std::vector<double> nmi;
    int trials = 0;
    Eigen::MatrixXd per_trial_angles;  // fold-1 estimate vs fold-2 estimate
    Eigen::MatrixXd per_trial_rand_a;  // fold-1 estimate vs random fold-2 rays
    Eigen::MatrixXd per_trial_rand_b;  // random fold-1 rays vs fold-2 estimate
    int chosen_k = 0;                  // argmin of nmi, ties to the smallest K
};

// Normalized model instability per K from stored per-trial terms:
// 2 * sum(angles) / sum(rand_a + rand_b), NaN entries excluded pairwise.
std::vector<double> nmi_from_terms(const Eigen::MatrixXd& angles,
                                   const Eigen::MatrixXd& rand_a,
                                   const Eigen::MatrixXd& rand_b);

// Stability-based selection of the source count. Each trial splits the
// columns of X into two random folds (fold 1 gets the extra point when N is
// odd), runs sector clustering plus edge detection independently per fold,
// and compares the two K-edge mixing estimates for every K in 2..k_max; the
// denominators use K rays drawn uniformly from each fold's clustering.
// X must already be preprocessed. Deterministic in (X, k_max, trials, cfg,
// seed) regardless of cfg.threads.
StabilityProfile stability_select(const Eigen::MatrixXd& X, int k_max, int trials,
                                  const CamConfig& cfg, std::uint64_t seed);

} // namespace cam
