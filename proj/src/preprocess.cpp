#include "cam/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cam/errors.hpp"

namespace cam {

std::pair<Eigen::MatrixXd, Eigen::VectorXd> unit_sum_scale(const Eigen::MatrixXd& X) {
    Eigen::VectorXd scales(X.rows());
    Eigen::MatrixXd scaled(X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double s = X.row(i).sum();
        if (!(s > 0.0)) {
            throw validation_error("unit_sum_scale: row " + std::to_string(i) +
                                   " has non-positive sum " + std::to_string(s));
        }
        scales[i] = s;
        scaled.row(i) = X.row(i) / s;
    }
    return {std::move(scaled), std::move(scales)};
}

std::pair<Eigen::MatrixXd, PreprocessReport> filter_small_norms(const Eigen::MatrixXd& X,
                                                                double remove_fraction) {
    if (remove_fraction < 0.0 || remove_fraction >= 1.0) {
        throw validation_error("filter_small_norms: remove_fraction must lie in [0, 1), got " +
                               std::to_string(remove_fraction));
    }
    const auto n = static_cast<int>(X.cols());
    const int remove = static_cast<int>(std::floor(remove_fraction * n));
    const int keep = n - remove;
    if (keep < 2) {
        throw validation_error("filter_small_norms: only " + std::to_string(keep) +
                               " columns would remain; need at least 2");
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> norms(n);
    for (int j = 0; j < n; ++j) norms[j] = X.col(j).norm();
    // Ascending by norm; equal norms keep index order, so the lower index
    // lands in the removed prefix.
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return norms[a] < norms[b]; });

    PreprocessReport report;
    report.removed_count = remove;
    report.kept_indices.assign(order.begin() + remove, order.end());
    std::sort(report.kept_indices.begin(), report.kept_indices.end());

    Eigen::MatrixXd out(X.rows(), keep);
    for (int k = 0; k < keep; ++k) out.col(k) = X.col(report.kept_indices[static_cast<std::size_t>(k)]);
    return {std::move(out), std::move(report)};
}

} // namespace cam
