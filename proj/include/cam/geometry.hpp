#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cam {

// Angle between u and v in radians, clamped to [0, pi].
// Conventions for degenerate inputs: angle(v, 0) = pi for v != 0,
// angle(0, 0) = 0. Throws validation_error on dimension mismatch.
double angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Result of projecting a vector onto the convex cone generated by the
// columns of a basis matrix.
struct Projection {
    Eigen::VectorXd image;         // nearest point in the cone
    Eigen::VectorXd coefficients;  // non-negative combination, image = B * coefficients
    double angle = 0.0;            // angle(v, image), pi when image is zero
};

// Non-negative least squares: argmin_{a >= 0} ||v - B a||^2 by Lawson-Hanson
// active-set pivoting. max_pivots <= 0 selects the default cap
// max(100, 10 * cols); exceeding the cap throws numerical_error.
// Ties in the entering-variable choice go to the lowest column index, so the
// pivot sequence is deterministic.
Eigen::VectorXd nnls(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v, int max_pivots = 0);

// Projection onto the finitely generated cone of basis columns. The basis
// must have at least one column and no all-zero column.
Projection project_onto_cone(const Eigen::VectorXd& v, const Eigen::MatrixXd& basis);

// Groups columns whose pairwise angle is < tol (transitively) and keeps one
// representative per group: the largest-norm member, ties to the lowest index.
// Returned indices are those representatives in increasing order.
std::vector<int> dedup_direction_indices(const Eigen::MatrixXd& points, double tol);

// Column-matrix convenience wrapper over dedup_direction_indices.
Eigen::MatrixXd dedup_directions(const Eigen::MatrixXd& points, double tol);

} // namespace cam
