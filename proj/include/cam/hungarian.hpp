#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cam {

// Minimum-cost perfect matching on a square cost matrix (rows to columns)
// by shortest augmenting paths with dual potentials. Returns assignment[i] =
// matched column of row i. O(n^3).
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

} // namespace cam
