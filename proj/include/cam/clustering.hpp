#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace cam {

// Result of sector-based clustering: unit-norm central rays, the nearest-ray
// assignment of each point, and the summed squared point-to-ray distance.
struct SectorModel {
    Eigen::MatrixXd rays;            // M x J, unit-norm columns
    std::vector<int> assignment;     // point -> sector index
    std::vector<int> sector_sizes;   // per-sector point counts, sums to N
    double distortion = 0.0;
};

// Per-iteration distortion values of the winning restart, for descent checks.
struct FitTrace {
    std::vector<double> distortions;
    int best_restart = -1;
};

// Distance from x to the line through the unit ray r: ||x - (r.x) r||.
double point_to_ray_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& r);

// Unit-norm principal eigenvector of sum_n x_n x_n^T over the sector's
// points, computed by power iteration started from the sector mean. The sign
// is chosen to give a non-negative inner product with the mean. Throws
// numerical_error when every point is zero.
Eigen::VectorXd update_ray(const Eigen::MatrixXd& points, const std::vector<int>& member_indices);

// Lloyd-style alternation: assign points to nearest rays, refit each ray as
// the principal eigenvector of its sector, repeat until the distortion stops
// changing. Runs `restarts` independent random initializations (J distinct
// data columns each) and returns the lowest-distortion model; distortion ties
// go to the lower restart index. Deterministic in (X, J, restarts, seed).
SectorModel fit_sectors(const Eigen::MatrixXd& X, int J, int restarts, std::uint64_t seed,
                        FitTrace* trace = nullptr);

// Number of points at an angle > 90 degrees from their assigned ray. Nonzero
// counts suggest J is too small for the data's angular spread.
int count_obtuse_assignments(const Eigen::MatrixXd& X, const SectorModel& model);

} // namespace cam
