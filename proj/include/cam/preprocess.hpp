#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cam {

// Bookkeeping from preprocessing, used downstream to map filtered columns
// back to the original data and to undo the row scaling.
struct PreprocessReport {
    std::vector<int> kept_indices;  // strictly increasing original column indices
    int removed_count = 0;
    Eigen::VectorXd row_scales;     // original row sums; X_orig = row_scales.asDiagonal() * X_scaled
};

// Scales each row of X to unit sum. Returns the scaled matrix and the
// original row sums. A row with non-positive sum is rejected with a
// diagnostic naming the row.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> unit_sum_scale(const Eigen::MatrixXd& X);

// Drops the floor(remove_fraction * N) columns of smallest Euclidean norm;
// norm ties are broken by column index, lower index removed first. Kept
// columns preserve their original order. Rejects if fewer than 2 columns
// would remain.
std::pair<Eigen::MatrixXd, PreprocessReport> filter_small_norms(const Eigen::MatrixXd& X,
                                                                double remove_fraction);

} // namespace cam
