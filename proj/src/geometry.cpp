#include "cam/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

#include "cam/errors.hpp"

namespace cam {

double angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != v.size()) {
        throw validation_error("angle: dimension mismatch (" + std::to_string(u.size()) +
                               " vs " + std::to_string(v.size()) + ")");
    }
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 && nv == 0.0) return 0.0;
    if (nu == 0.0 || nv == 0.0) return std::numbers::pi;
    // 2 atan2(|u' - v'|, |u' + v'|) on the normalized vectors. Unlike
    // acos of the cosine this stays fully accurate near 0 and pi, and
    // identical directions give exactly zero.
    const Eigen::VectorXd un = u / nu;
    const Eigen::VectorXd vn = v / nv;
    return 2.0 * std::atan2((un - vn).norm(), (un + vn).norm());
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v, int max_pivots) {
    const auto d = basis.rows();
    const auto q = basis.cols();
    if (v.size() != d) {
        throw validation_error("nnls: vector dimension " + std::to_string(v.size()) +
                               " does not match basis rows " + std::to_string(d));
    }
    if (q == 0) return Eigen::VectorXd(0);
    if (max_pivots <= 0) max_pivots = std::max<int>(100, 10 * static_cast<int>(q));

    Eigen::VectorXd x = Eigen::VectorXd::Zero(q);
    std::vector<bool> passive(q, false);
    std::vector<int> passive_idx;
    passive_idx.reserve(q);

    // Dual feasibility threshold, scaled to the gradient magnitude of this
    // instance; below it a positive component of the dual is treated as zero.
    const double gradient_scale = (basis.transpose() * v).cwiseAbs().maxCoeff();
    const double dual_tol = 1e-12 * std::max(1.0, gradient_scale);

    // Solves the unconstrained least squares on the passive set.
    auto solve_passive = [&](Eigen::VectorXd& z) {
        const auto p = static_cast<Eigen::Index>(passive_idx.size());
        Eigen::MatrixXd sub(d, p);
        for (Eigen::Index k = 0; k < p; ++k) sub.col(k) = basis.col(passive_idx[k]);
        z = sub.colPivHouseholderQr().solve(v);
    };

    int pivots = 0;
    for (;;) {
        const Eigen::VectorXd w = basis.transpose() * (v - basis * x);
        int enter = -1;
        double best = dual_tol;
        for (Eigen::Index j = 0; j < q; ++j) {
            if (!passive[j] && w[j] > best) {
                best = w[j];
                enter = static_cast<int>(j);
            }
        }
        if (enter < 0) break;

        passive[enter] = true;
        passive_idx.push_back(enter);

        for (;;) {
            if (++pivots > max_pivots) {
                throw numerical_error("nnls: no convergence after " + std::to_string(max_pivots) +
                                      " pivots; basis is likely ill-conditioned");
            }
            Eigen::VectorXd z;
            solve_passive(z);
            bool all_positive = true;
            for (Eigen::Index k = 0; k < z.size(); ++k) {
                if (z[k] <= 0.0) { all_positive = false; break; }
            }
            if (all_positive) {
                x.setZero();
                for (std::size_t k = 0; k < passive_idx.size(); ++k) x[passive_idx[k]] = z[k];
                break;
            }
            // Step toward z until the first passive coordinate hits zero.
            double alpha = 1.0;
            for (std::size_t k = 0; k < passive_idx.size(); ++k) {
                if (z[k] <= 0.0) {
                    const double xi = x[passive_idx[k]];
                    const double t = xi / (xi - z[k]);
                    alpha = std::min(alpha, t);
                }
            }
            for (std::size_t k = 0; k < passive_idx.size(); ++k) {
                const int j = passive_idx[k];
                x[j] += alpha * (z[k] - x[j]);
            }
            // Retire coordinates driven to (or past) zero; keep index order.
            std::vector<int> still;
            still.reserve(passive_idx.size());
            for (const int j : passive_idx) {
                if (x[j] > 0.0 && std::abs(x[j]) > 1e-14 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
                    still.push_back(j);
                } else {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            passive_idx = std::move(still);
            if (passive_idx.empty()) break;
        }
    }
    return x;
}

Projection project_onto_cone(const Eigen::VectorXd& v, const Eigen::MatrixXd& basis) {
    if (basis.cols() < 1) {
        throw validation_error("project_onto_cone: basis must have at least one generator");
    }
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        if (basis.col(j).norm() == 0.0) {
            throw validation_error("project_onto_cone: generator " + std::to_string(j) +
                                   " is the zero vector");
        }
    }
    Projection p;
    p.coefficients = nnls(basis, v);
    p.image = basis * p.coefficients;
    p.angle = angle(v, p.image);
    return p;
}

std::vector<int> dedup_direction_indices(const Eigen::MatrixXd& points, double tol) {
    if (tol < 0.0) throw validation_error("dedup_directions: tol must be non-negative");
    const auto n = static_cast<int>(points.cols());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (angle(points.col(i), points.col(j)) < tol) {
                const int ri = find(i);
                const int rj = find(j);
                if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
            }
        }
    }
    // Representative of each class: largest norm, ties to the lowest index.
    std::vector<int> rep(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (rep[r] < 0 || points.col(i).norm() > points.col(rep[r]).norm()) rep[r] = i;
    }
    std::vector<int> kept;
    for (int r = 0; r < n; ++r) {
        if (rep[r] >= 0) kept.push_back(rep[r]);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

Eigen::MatrixXd dedup_directions(const Eigen::MatrixXd& points, double tol) {
    const auto kept = dedup_direction_indices(points, tol);
    Eigen::MatrixXd out(points.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = points.col(kept[k]);
    return out;
}

} // namespace cam
