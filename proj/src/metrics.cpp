#include "cam/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cam/edges.hpp"
#include "cam/errors.hpp"
#include "cam/stability.hpp"

namespace cam {

namespace {

// Pearson correlation; returns NaN when either vector has zero variance.
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd da = a.array() - a.mean();
    const Eigen::VectorXd db = b.array() - b.mean();
    const double va = da.squaredNorm();
    const double vb = db.squaredNorm();
    if (va == 0.0 || vb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return da.dot(db) / std::sqrt(va * vb);
}

} // namespace

EvalResult eval_mixing(const Eigen::MatrixXd& A_true, const Eigen::MatrixXd& A_hat) {
    const auto [rad, phi] = min_avg_angle(A_true, A_hat);
    EvalResult r;
    r.E_A = 1.0 - rad / std::numbers::pi;
    r.pairing = phi;
    return r;
}

double eval_sources(const Eigen::MatrixXd& S_true, const Eigen::MatrixXd& S_hat,
                    const std::vector<int>& pairing) {
    if (S_true.rows() != S_hat.rows() || S_true.cols() != S_hat.cols()) {
        throw validation_error("eval_sources: source matrices must have identical shape");
    }
    if (static_cast<Eigen::Index>(pairing.size()) != S_true.rows()) {
        throw validation_error("eval_sources: pairing size does not match source count");
    }
    double total = 0.0;
    for (Eigen::Index k = 0; k < S_true.rows(); ++k) {
        const double rho = pearson(S_true.row(k).transpose(),
                                   S_hat.row(pairing[static_cast<std::size_t>(k)]).transpose());
        if (std::isnan(rho)) {
            warn("eval_sources: source pair " + std::to_string(k) +
                 " has zero variance; correlation counted as 0");
            continue;
        }
        total += rho;
    }
    return total / static_cast<double>(S_true.rows());
}

double eval_marker_patterns(const Eigen::MatrixXd& S_true, const Eigen::MatrixXd& S_hat,
                            const std::vector<int>& pairing, int per_source) {
    if (S_true.rows() != S_hat.rows() || S_true.cols() != S_hat.cols()) {
        throw validation_error("eval_marker_patterns: source matrices must have identical shape");
    }
    const auto markers = select_marker_points(S_true, per_source);
    double total = 0.0;
    for (Eigen::Index k = 0; k < S_true.rows(); ++k) {
        const auto& idx = markers[static_cast<std::size_t>(k)];
        Eigen::VectorXd t(static_cast<Eigen::Index>(idx.size()));
        Eigen::VectorXd e(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            t[static_cast<Eigen::Index>(i)] = S_true(k, idx[i]);
            e[static_cast<Eigen::Index>(i)] = S_hat(pairing[static_cast<std::size_t>(k)], idx[i]);
        }
        const double rho = pearson(t, e);
        if (std::isnan(rho)) {
            warn("eval_marker_patterns: source pair " + std::to_string(k) +
                 " has zero variance over its markers; counted as 0");
            continue;
        }
        total += rho;
    }
    return total / static_cast<double>(S_true.rows());
}

} // namespace cam
