#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cam/clustering.hpp"

namespace cam {

// Surviving lateral-edge candidates after the removal scan.
struct EdgeSet {
    std::vector<int> ray_indices;  // ascending indices into the ray matrix
    double tau = 0.0;
};

struct MixingEstimate {
    Eigen::MatrixXd A_hat;           // M x K, selected rays under the column scaling convention
    std::vector<int> selected_edges; // ascending ray indices
    double fit_error = 0.0;
};

struct SourceEstimate {
    Eigen::MatrixXd S_hat;        // K x N, entrywise non-negative
    Eigen::MatrixXd projected_X;  // M x N, A_hat * S_hat
};

struct GammaNormalization {
    Eigen::VectorXd gamma;
    Eigen::MatrixXd A_tilde;        // columns scaled to unit inner product with gamma
    Eigen::MatrixXd X_tilde;        // kept columns of X scaled by 1/(gamma.x)
    std::vector<int> kept_columns;  // columns with gamma.x > 0, ascending
    Eigen::VectorXd edge_scales;    // gamma^T a_k per column of A_hat
    Eigen::VectorXd point_scales;   // gamma^T x_n per kept column
};

// Removal scan over ray columns: walks the current candidate list in index
// order, projects each ray onto the cone of the remaining candidates, and
// drops it when the projection angle is <= tau (the ray lies inside the cone
// of the others, so it cannot be a lateral edge). The position does not
// advance on a removal. Input rays must be unit-norm with duplicate
// directions already collapsed.
EdgeSet detect_edges(const Eigen::MatrixXd& rays, double tau);

// Weighted model fitting error of a candidate generator set: for every
// sector ray outside the candidate set, N_j times its angle to the cone of
// the candidates. Candidate members contribute exactly zero and are skipped.
double edge_fitting_error(const SectorModel& model, const std::vector<int>& candidate);

// Picks the size-K subset of detected edges minimizing edge_fitting_error.
// Exhaustive enumeration and the branch-and-bound path give identical
// results (equal-error ties go to the lexicographically smallest index
// tuple); branch_and_bound trades exactness for nothing, it only prunes
// using the fact that the error never increases when a generator is added.
// Throws validation_error when K exceeds the number of detected edges.
MixingEstimate select_k_edges(const SectorModel& model, const EdgeSet& edges, int K,
                              bool branch_and_bound);

// Per-column NNLS against A_hat. The coefficients are the recovered sources;
// the projection of each data column onto the cone of A_hat is A_hat * s_n.
// Rank-deficient A_hat throws numerical_error; condition number above 1e8
// warns.
SourceEstimate recover_sources(const Eigen::MatrixXd& X, const Eigen::MatrixXd& A_hat);

// Perspective normalization: scales every data column to unit inner product
// with a vector gamma chosen to have positive inner product with every
// mixing column. Columns with gamma.x <= 0 are dropped with a warning.
GammaNormalization gamma_normalize(const Eigen::MatrixXd& X, const Eigen::MatrixXd& A_hat);

// Per-row argmax of the normalized source matrix; ties to the lowest column.
std::vector<int> max_dominance_indices(const Eigen::MatrixXd& S_tilde);

// For each source row, the per_source column indices with the largest
// dominance ratio S(k,n) / colsum(n), in descending ratio order, ratio ties
// to the lowest index. Zero column sums never win. per_source beyond N is
// truncated with a warning.
std::vector<std::vector<int>> select_marker_points(const Eigen::MatrixXd& S, int per_source);

} // namespace cam
