#include "cam/edges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cam/errors.hpp"
#include "cam/geometry.hpp"

namespace cam {

EdgeSet detect_edges(const Eigen::MatrixXd& rays, double tau) {
    if (rays.cols() < 1) throw validation_error("detect_edges: no rays given");
    if (tau < 0.0) throw validation_error("detect_edges: tau must be non-negative");
    std::vector<int> current(static_cast<std::size_t>(rays.cols()));
    for (std::size_t j = 0; j < current.size(); ++j) current[j] = static_cast<int>(j);

    std::size_t pos = 0;
    Eigen::MatrixXd others(rays.rows(), rays.cols() - 1);
    while (pos < current.size()) {
        if (current.size() == 1) break;  // a lone ray is trivially an edge
        others.resize(rays.rows(), static_cast<Eigen::Index>(current.size() - 1));
        Eigen::Index c = 0;
        for (std::size_t i = 0; i < current.size(); ++i) {
            if (i != pos) others.col(c++) = rays.col(current[i]);
        }
        const Projection p = project_onto_cone(rays.col(current[pos]), others);
        if (p.angle <= tau) {
            current.erase(current.begin() + static_cast<std::ptrdiff_t>(pos));
        } else {
            ++pos;
        }
    }
    EdgeSet out;
    out.ray_indices = std::move(current);
    out.tau = tau;
    return out;
}

double edge_fitting_error(const SectorModel& model, const std::vector<int>& candidate) {
    const auto j_total = static_cast<int>(model.rays.cols());
    Eigen::MatrixXd basis(model.rays.rows(), static_cast<Eigen::Index>(candidate.size()));
    for (std::size_t c = 0; c < candidate.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = model.rays.col(candidate[c]);
    double total = 0.0;
    for (int j = 0; j < j_total; ++j) {
        if (std::find(candidate.begin(), candidate.end(), j) != candidate.end()) continue;
        const int weight = model.sector_sizes[static_cast<std::size_t>(j)];
        if (weight == 0) continue;
        total += weight * project_onto_cone(model.rays.col(j), basis).angle;
    }
    return total;
}

namespace {

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Incumbent {
    double error = std::numeric_limits<double>::infinity();
    std::vector<int> kept;
    bool has_value = false;

    void offer(double e, const std::vector<int>& cand) {
        if (!has_value || e < error || (e == error && lex_less(cand, kept))) {
            error = e;
            kept = cand;
            has_value = true;
        }
    }
};

void exhaustive_search(const SectorModel& model, const std::vector<int>& edges, int K,
                       Incumbent& best) {
    const int j_star = static_cast<int>(edges.size());
    std::vector<int> choose(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) choose[static_cast<std::size_t>(i)] = i;
    std::vector<int> cand(static_cast<std::size_t>(K));
    for (;;) {
        for (int i = 0; i < K; ++i) cand[static_cast<std::size_t>(i)] = edges[static_cast<std::size_t>(choose[static_cast<std::size_t>(i)])];
        best.offer(edge_fitting_error(model, cand), cand);
        // Next combination in lexicographic order.
        int i = K - 1;
        while (i >= 0 && choose[static_cast<std::size_t>(i)] == j_star - K + i) --i;
        if (i < 0) break;
        ++choose[static_cast<std::size_t>(i)];
        for (int t = i + 1; t < K; ++t) choose[static_cast<std::size_t>(t)] = choose[static_cast<std::size_t>(t - 1)] + 1;
    }
}

// Branch and bound over the removal tree: each node drops generators at
// strictly increasing positions until K remain. Because adding a generator
// never increases the fitting error, a node's error is a lower bound for
// every descendant, so a node worse than the incumbent is pruned. Children
// are visited cheapest-first to tighten the incumbent early.
void branch(const SectorModel& model, const std::vector<int>& edges, int K,
            std::vector<int>& kept_positions, int next_pos, Incumbent& best) {
    const int removals_left = static_cast<int>(kept_positions.size()) - K;
    if (removals_left == 0) {
        std::vector<int> cand;
        cand.reserve(kept_positions.size());
        for (const int p : kept_positions) cand.push_back(edges[static_cast<std::size_t>(p)]);
        best.offer(edge_fitting_error(model, cand), cand);
        return;
    }
    struct Child {
        double error;
        int drop_index;  // index into kept_positions
    };
    std::vector<Child> children;
    for (std::size_t i = 0; i < kept_positions.size(); ++i) {
        const int p = kept_positions[i];
        if (p < next_pos) continue;
        // Enough higher kept positions must remain for the later removals.
        int higher = 0;
        for (const int q : kept_positions) {
            if (q > p) ++higher;
        }
        if (higher < removals_left - 1) continue;
        std::vector<int> child_kept;
        child_kept.reserve(kept_positions.size() - 1);
        for (std::size_t t = 0; t < kept_positions.size(); ++t) {
            if (t != i) child_kept.push_back(kept_positions[t]);
        }
        std::vector<int> cand;
        cand.reserve(child_kept.size());
        for (const int q : child_kept) cand.push_back(edges[static_cast<std::size_t>(q)]);
        children.push_back({edge_fitting_error(model, cand), static_cast<int>(i)});
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.error < b.error; });
    for (const Child& ch : children) {
        if (best.has_value && ch.error > best.error) continue;
        const int p = kept_positions[static_cast<std::size_t>(ch.drop_index)];
        std::vector<int> child_kept;
        child_kept.reserve(kept_positions.size() - 1);
        for (std::size_t t = 0; t < kept_positions.size(); ++t) {
            if (static_cast<int>(t) != ch.drop_index) child_kept.push_back(kept_positions[t]);
        }
        branch(model, edges, K, child_kept, p + 1, best);
    }
}

Eigen::MatrixXd apply_column_convention(const Eigen::MatrixXd& columns) {
    bool all_positive = true;
    for (Eigen::Index k = 0; k < columns.cols(); ++k) {
        if (columns.col(k).sum() <= 0.0) { all_positive = false; break; }
    }
    if (!all_positive) return columns;
    Eigen::MatrixXd out = columns;
    for (Eigen::Index k = 0; k < out.cols(); ++k) out.col(k) /= out.col(k).sum();
    return out;
}

} // namespace

MixingEstimate select_k_edges(const SectorModel& model, const EdgeSet& edges, int K,
                              bool branch_and_bound) {
    const int j_star = static_cast<int>(edges.ray_indices.size());
    if (K < 1) throw validation_error("select_k_edges: K must be at least 1");
    if (K > j_star) {
        throw validation_error("select_k_edges: only " + std::to_string(j_star) +
                               " edges detected but K = " + std::to_string(K) +
                               "; raise the sector count or lower tau");
    }
    Incumbent best;
    if (branch_and_bound) {
        std::vector<int> all_positions(static_cast<std::size_t>(j_star));
        for (int i = 0; i < j_star; ++i) all_positions[static_cast<std::size_t>(i)] = i;
        branch(model, edges.ray_indices, K, all_positions, 0, best);
    } else {
        exhaustive_search(model, edges.ray_indices, K, best);
    }

    MixingEstimate out;
    out.selected_edges = best.kept;
    out.fit_error = best.error;
    Eigen::MatrixXd cols(model.rays.rows(), K);
    for (int k = 0; k < K; ++k) cols.col(k) = model.rays.col(best.kept[static_cast<std::size_t>(k)]);
    out.A_hat = apply_column_convention(cols);
    return out;
}

SourceEstimate recover_sources(const Eigen::MatrixXd& X, const Eigen::MatrixXd& A_hat) {
    if (X.rows() != A_hat.rows()) {
        throw validation_error("recover_sources: X has " + std::to_string(X.rows()) +
                               " rows but the mixing estimate has " + std::to_string(A_hat.rows()));
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A_hat);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    const double smin = sv.size() > 0 ? sv[sv.size() - 1] : 0.0;
    if (A_hat.cols() > A_hat.rows() || smin <= smax * 1e-12) {
        throw numerical_error("recover_sources: mixing estimate is rank-deficient; "
                              "sources are not recoverable");
    }
    if (smax / smin > 1e8) {
        warn("recover_sources: mixing estimate condition number " + std::to_string(smax / smin) +
             " exceeds 1e8; recovered sources may be unreliable");
    }
    SourceEstimate out;
    out.S_hat.resize(A_hat.cols(), X.cols());
    for (Eigen::Index n = 0; n < X.cols(); ++n) {
        out.S_hat.col(n) = nnls(A_hat, X.col(n));
    }
    out.projected_X = A_hat * out.S_hat;
    return out;
}

GammaNormalization gamma_normalize(const Eigen::MatrixXd& X, const Eigen::MatrixXd& A_hat) {
    if (X.rows() != A_hat.rows()) {
        throw validation_error("gamma_normalize: X and the mixing estimate disagree on rows");
    }
    const auto m = X.rows();
    const auto k = A_hat.cols();
    Eigen::VectorXd gamma = Eigen::VectorXd::Ones(m);
    bool ones_ok = true;
    for (Eigen::Index j = 0; j < k; ++j) {
        if (gamma.dot(A_hat.col(j)) <= 0.0) { ones_ok = false; break; }
    }
    if (!ones_ok) {
        // gamma = A (A^T A)^{-1} 1 gives gamma . a_j = 1 for every column.
        const Eigen::MatrixXd gram = A_hat.transpose() * A_hat;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        if (ldlt.info() != Eigen::Success) {
            throw numerical_error("gamma_normalize: mixing estimate is rank-deficient, "
                                  "cannot construct a separating gamma");
        }
        gamma = A_hat * ldlt.solve(Eigen::VectorXd::Ones(k));
        for (Eigen::Index j = 0; j < k; ++j) {
            if (gamma.dot(A_hat.col(j)) <= 0.0) {
                throw numerical_error("gamma_normalize: constructed gamma fails positivity, "
                                      "mixing estimate is degenerate");
            }
        }
    }

    GammaNormalization out;
    out.gamma = gamma;
    out.edge_scales.resize(k);
    out.A_tilde.resize(m, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        out.edge_scales[j] = gamma.dot(A_hat.col(j));
        out.A_tilde.col(j) = A_hat.col(j) / out.edge_scales[j];
    }
    std::vector<double> scales;
    for (Eigen::Index n = 0; n < X.cols(); ++n) {
        const double s = gamma.dot(X.col(n));
        if (s > 0.0) {
            out.kept_columns.push_back(static_cast<int>(n));
            scales.push_back(s);
        }
    }
    const auto dropped = X.cols() - static_cast<Eigen::Index>(out.kept_columns.size());
    if (dropped > 0) {
        warn("gamma_normalize: dropped " + std::to_string(dropped) +
             " data columns with non-positive gamma inner product");
    }
    out.point_scales = Eigen::Map<const Eigen::VectorXd>(scales.data(), static_cast<Eigen::Index>(scales.size()));
    out.X_tilde.resize(m, static_cast<Eigen::Index>(out.kept_columns.size()));
    for (std::size_t i = 0; i < out.kept_columns.size(); ++i) {
        out.X_tilde.col(static_cast<Eigen::Index>(i)) = X.col(out.kept_columns[i]) / scales[i];
    }
    return out;
}

std::vector<int> max_dominance_indices(const Eigen::MatrixXd& S_tilde) {
    if (S_tilde.cols() < 1) throw validation_error("max_dominance_indices: no columns");
    std::vector<int> out(static_cast<std::size_t>(S_tilde.rows()));
    for (Eigen::Index kk = 0; kk < S_tilde.rows(); ++kk) {
        Eigen::Index best = 0;
        for (Eigen::Index n = 1; n < S_tilde.cols(); ++n) {
            if (S_tilde(kk, n) > S_tilde(kk, best)) best = n;
        }
        out[static_cast<std::size_t>(kk)] = static_cast<int>(best);
    }
    return out;
}

std::vector<std::vector<int>> select_marker_points(const Eigen::MatrixXd& S, int per_source) {
    if (per_source < 1) throw validation_error("select_marker_points: per_source must be >= 1");
    const auto n = S.cols();
    int take = per_source;
    if (take > n) {
        warn("select_marker_points: requested " + std::to_string(per_source) +
             " markers per source but only " + std::to_string(n) + " points exist; truncating");
        take = static_cast<int>(n);
    }
    Eigen::VectorXd colsum = S.colwise().sum();
    std::vector<std::vector<int>> out;
    std::vector<int> order(static_cast<std::size_t>(n));
    for (Eigen::Index kk = 0; kk < S.rows(); ++kk) {
        std::vector<double> ratio(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j) {
            ratio[static_cast<std::size_t>(j)] = colsum[j] > 0.0
                ? S(kk, j) / colsum[j]
                : -std::numeric_limits<double>::infinity();
        }
        for (std::size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return ratio[static_cast<std::size_t>(a)] > ratio[static_cast<std::size_t>(b)]; });
        out.emplace_back(order.begin(), order.begin() + take);
    }
    return out;
}

} // namespace cam
