#include "cam/hungarian.hpp"

#include <limits>

#include "cam/errors.hpp"

namespace cam {

// Jonker-Volgenant style: rows are inserted one at a time; each insertion
// finds a shortest augmenting path in the reduced-cost graph using the 1-based
// sentinel-column formulation, then flips the matching along it.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const auto n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw validation_error("solve_assignment: cost matrix must be square");
    if (n == 0) return {};

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);   // row potentials
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);   // column potentials
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);    // column -> row, 1-based, 0 = free
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> assignment(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j) {
        assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] = j - 1;
    }
    return assignment;
}

} // namespace cam
