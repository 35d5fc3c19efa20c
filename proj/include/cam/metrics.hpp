#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cam {

struct EvalResult {
    double E_A = 0.0;
    double E_S = 0.0;
    std::vector<int> pairing;  // pairing[k] = estimated column matched to true column k
};

// Mixing accuracy E_A = 1 - min_avg_angle(A_true, A_hat) / pi, together with
// the minimizing column pairing. 1 means every estimated column is colinear
// with its matched true column.
EvalResult eval_mixing(const Eigen::MatrixXd& A_true, const Eigen::MatrixXd& A_hat);

// Mean Pearson correlation between true source rows and their paired
// estimated rows. A zero-variance row makes the correlation undefined; that
// pair contributes 0 with a warning.
double eval_sources(const Eigen::MatrixXd& S_true, const Eigen::MatrixXd& S_hat,
                    const std::vector<int>& pairing);

// eval_sources restricted per source to the per_source columns where the
// true source is most dominant (largest S(k,n)/colsum ratio).
double eval_marker_patterns(const Eigen::MatrixXd& S_true, const Eigen::MatrixXd& S_hat,
                            const std::vector<int>& pairing, int per_source);

} // namespace cam
