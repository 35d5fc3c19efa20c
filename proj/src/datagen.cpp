#include "cam/datagen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cam/errors.hpp"
#include "cam/geometry.hpp"
#include "cam/rng.hpp"

namespace cam {

MixingScenario parse_scenario(const std::string& name) {
    if (name == "exact") return MixingScenario::exact;
    if (name == "over") return MixingScenario::over;
    if (name == "under") return MixingScenario::under;
    throw validation_error("unknown mixing scenario '" + name + "'; use exact, over, or under");
}

std::string scenario_name(MixingScenario s) {
    switch (s) {
        case MixingScenario::exact: return "exact";
        case MixingScenario::over: return "over";
        case MixingScenario::under: return "under";
    }
    return "unknown";
}

double snr_db(const Eigen::MatrixXd& X_clean, const NoiseSpec& noise) {
    if (noise.covariance.rows() != X_clean.rows() || noise.covariance.cols() != X_clean.rows()) {
        throw validation_error("snr_db: covariance shape does not match the observation rows");
    }
    const double tr = noise.covariance.trace();
    if (!(tr > 0.0)) {
        throw validation_error("snr_db: noise covariance has non-positive trace; SNR undefined");
    }
    const double signal = X_clean.squaredNorm();
    const auto n = static_cast<double>(X_clean.cols());
    return 10.0 * std::log10(signal / (n * tr));
}

namespace {

// Symmetric PSD factor L with L L^T = covariance, via eigendecomposition;
// tiny negative eigenvalues from rounding are clamped to zero.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& cov, const std::string& where) {
    if (cov.rows() != cov.cols()) {
        throw validation_error(where + ": covariance must be square");
    }
    const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff())) {
        throw validation_error(where + ": covariance is not symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw numerical_error(where + ": eigendecomposition of the covariance failed");
    }
    Eigen::VectorXd lambda = eig.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < -1e-12 * std::max(1.0, lambda.cwiseAbs().maxCoeff())) {
            throw validation_error(where + ": covariance is not positive semidefinite");
        }
        lambda[i] = std::max(lambda[i], 0.0);
    }
    return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
}

// Column draws from N(mean, L L^T); consumes rows-many normals per column.
Eigen::MatrixXd gaussian_columns(const Eigen::VectorXd& mean, const Eigen::MatrixXd& factor,
                                 Eigen::Index count, Rng& rng) {
    Eigen::MatrixXd out(mean.size(), count);
    Eigen::VectorXd z(mean.size());
    for (Eigen::Index n = 0; n < count; ++n) {
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
        out.col(n) = mean + factor * z;
    }
    return out;
}

} // namespace

Eigen::MatrixXd mix(const Eigen::MatrixXd& S, const Eigen::MatrixXd& A, const NoiseSpec& noise) {
    if (A.cols() != S.rows()) {
        throw validation_error("mix: mixing columns (" + std::to_string(A.cols()) +
                               ") must equal source rows (" + std::to_string(S.rows()) + ")");
    }
    Eigen::MatrixXd X = A * S;
    if (noise.covariance.size() == 0 || noise.covariance.cwiseAbs().maxCoeff() == 0.0) {
        return X;  // noise-free request stays bitwise exact
    }
    if (noise.covariance.rows() != X.rows()) {
        throw validation_error("mix: noise covariance shape does not match the mixture rows");
    }
    const Eigen::MatrixXd factor = psd_factor(noise.covariance, "mix");
    Rng rng(noise.seed);
    X += gaussian_columns(Eigen::VectorXd::Zero(X.rows()), factor, X.cols(), rng);
    return X;
}

ToyData gen_toy(const ToySpec& spec, std::uint64_t seed) {
    if (spec.n_points < 2 || spec.n_points % 2 != 0) {
        throw validation_error("gen_toy: n_points must be even and positive");
    }
    const int half = spec.n_points / 2;
    ToyData out;
    out.A_true = spec.mixing;
    out.S_true.resize(3, spec.n_points);

    Rng exp_rng(derive_seed(seed, "exp"));
    for (int n = 0; n < half; ++n) {
        for (int k = 0; k < 3; ++k) {
            out.S_true(k, n) = exp_rng.exponential(spec.mu_exp[k]);
        }
    }
    Rng gauss_rng(derive_seed(seed, "gauss"));
    const Eigen::MatrixXd factor = psd_factor(spec.sigma_gauss, "gen_toy");
    const Eigen::MatrixXd g = gaussian_columns(spec.mu_gauss, factor, half, gauss_rng);
    out.S_true.rightCols(half) = g.cwiseAbs();

    NoiseSpec noise;
    noise.covariance = spec.noise_variance * Eigen::Matrix3d::Identity();
    noise.seed = derive_seed(seed, "noise");
    out.X = mix(out.S_true, out.A_true, noise);
    return out;
}

Eigen::MatrixXd gen_random_mixing(int M, int K, MixingScenario scenario, std::uint64_t seed,
                                  bool mixed_sign, int budget) {
    switch (scenario) {
        case MixingScenario::exact:
            if (M != K) throw validation_error("gen_random_mixing: exact scenario needs M = K");
            break;
        case MixingScenario::over:
            if (M <= K) throw validation_error("gen_random_mixing: over scenario needs M > K");
            break;
        case MixingScenario::under:
            if (M >= K || M < 3) {
                throw validation_error("gen_random_mixing: under scenario needs 3 <= M < K");
            }
            break;
    }
    Rng rng(seed);
    for (int attempt = 0; attempt < budget; ++attempt) {
        Eigen::MatrixXd A(M, K);
        for (int i = 0; i < M; ++i) {
            for (int j = 0; j < K; ++j) {
                A(i, j) = mixed_sign ? rng.uniform(-0.3, 1.0) : rng.uniform01();
            }
        }
        bool row_ok = true;
        for (int i = 0; i < M; ++i) {
            const double s = A.row(i).sum();
            if (!(s > 0.0)) { row_ok = false; break; }
            A.row(i) /= s;
        }
        if (!row_ok) continue;

        if (scenario == MixingScenario::under) {
            bool sep = true;
            for (int k = 0; k < K && sep; ++k) {
                Eigen::MatrixXd others(M, K - 1);
                Eigen::Index c = 0;
                for (int j = 0; j < K; ++j) {
                    if (j != k) others.col(c++) = A.col(j);
                }
                try {
                    if (project_onto_cone(A.col(k), others).angle < std::numbers::pi / 7.0) {
                        sep = false;
                    }
                } catch (const numerical_error&) {
                    sep = false;  // degenerate candidate, try another
                }
            }
            if (sep) return A;
        } else {
            const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
            const auto& sv = svd.singularValues();
            const double smin = sv[sv.size() - 1];
            if (smin > 0.0 && sv[0] / smin <= 4.0) return A;
        }
    }
    throw numerical_error("gen_random_mixing: no acceptable matrix in " + std::to_string(budget) +
                          " draws for scenario " + scenario_name(scenario));
}

NoiseSpec calibrate_noise_for_snr(const Eigen::MatrixXd& X_clean, double target_db) {
    if (!std::isfinite(target_db)) {
        throw validation_error("calibrate_noise_for_snr: target must be finite");
    }
    const auto m = static_cast<double>(X_clean.rows());
    const auto n = static_cast<double>(X_clean.cols());
    const double sigma2 = X_clean.squaredNorm() / (n * m * std::pow(10.0, target_db / 10.0));
    NoiseSpec spec;
    spec.covariance = sigma2 * Eigen::MatrixXd::Identity(X_clean.rows(), X_clean.rows());
    return spec;
}

Eigen::MatrixXd gen_correlated_sources(int K, int N, std::uint64_t seed) {
    if (K < 1 || N < 2) throw validation_error("gen_correlated_sources: need K >= 1 and N >= 2");
    const int half = N / 2;
    Eigen::MatrixXd S(K, N);
    Rng exp_rng(derive_seed(seed, "exp"));
    for (int n = 0; n < half; ++n) {
        for (int k = 0; k < K; ++k) S(k, n) = exp_rng.exponential(1.0);
    }
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(K, K, 0.9);
    sigma.diagonal().setOnes();
    Rng gauss_rng(derive_seed(seed, "gauss"));
    const Eigen::MatrixXd factor = psd_factor(sigma, "gen_correlated_sources");
    S.rightCols(N - half) =
        gaussian_columns(Eigen::VectorXd::Zero(K), factor, N - half, gauss_rng).cwiseAbs();
    return S;
}

Eigen::MatrixXd gen_sources_with_wgp(int K, int N, std::uint64_t seed) {
    if (N < 2 * K) throw validation_error("gen_sources_with_wgp: need N >= 2K");
    Eigen::MatrixXd S = gen_correlated_sources(K, N, seed);
    Rng rng(derive_seed(seed, "wgp"));
    // Plant one pure column per source so every source owns a grounded point.
    for (int k = 0; k < K; ++k) {
        S.col(k).setZero();
        S(k, k) = 1.0 + rng.uniform01();
    }
    return S;
}

Eigen::MatrixXd gen_mixed_sources(int K, int N, double min_level, std::uint64_t seed) {
    if (!(min_level > 0.0 && min_level < 1.0)) {
        throw validation_error("gen_mixed_sources: min_level must lie in (0, 1)");
    }
    Eigen::MatrixXd S(K, N);
    Rng rng(seed);
    for (int n = 0; n < N; ++n) {
        for (int k = 0; k < K; ++k) S(k, n) = rng.uniform(min_level, 1.0);
    }
    return S;
}

} // namespace cam
