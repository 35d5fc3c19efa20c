#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace cam {

// Additive noise model: columns drawn i.i.d. from N(0, covariance).
struct NoiseSpec {
    Eigen::MatrixXd covariance;  // symmetric PSD
    std::uint64_t seed = 0;
};

// Three-source toy protocol: half exponential sources, half absolute-value
// correlated Gaussians, fixed 3x3 mixing with negative entries and unit row
// sums. Defaults reproduce the reference dataset.
struct ToySpec {
    int n_points = 1600;
    Eigen::Matrix3d mixing = (Eigen::Matrix3d() << -0.1, 0.5, 0.6,
                                                    0.6, -0.1, 0.5,
                                                    0.5, 0.6, -0.1).finished();
    Eigen::Vector3d mu_exp = Eigen::Vector3d::Ones();
    Eigen::Vector3d mu_gauss = Eigen::Vector3d::Zero();
    Eigen::Matrix3d sigma_gauss = (Eigen::Matrix3d() << 1.0, 0.9, 0.9,
                                                        0.9, 1.0, 0.9,
                                                        0.9, 0.9, 1.0).finished();
    double noise_variance = 0.07;  // isotropic, covariance = noise_variance * I
};

struct ToyData {
    Eigen::MatrixXd X;
    Eigen::MatrixXd A_true;
    Eigen::MatrixXd S_true;
};

enum class MixingScenario { exact, over, under };

MixingScenario parse_scenario(const std::string& name);
std::string scenario_name(MixingScenario s);

// Dataset SNR in dB: 10 log10( sum_n ||x_n||^2 / (N * trace(covariance)) ),
// with X_clean the noise-free mixtures. Zero-trace covariance is rejected
// (the ratio would be infinite).
double snr_db(const Eigen::MatrixXd& X_clean, const NoiseSpec& noise);

// X = A S + E with E ~ N(0, covariance) per column. A zero covariance skips
// the noise draw entirely, so X equals A*S bitwise.
Eigen::MatrixXd mix(const Eigen::MatrixXd& S, const Eigen::MatrixXd& A, const NoiseSpec& noise);

ToyData gen_toy(const ToySpec& spec, std::uint64_t seed);

// Random mixing matrix with unit row sums, rejection-sampled until the
// scenario constraint holds: exact/over need condition number <= 4, under
// needs every column at angle >= pi/7 from the cone of the other columns.
// mixed_sign draws entries from uniform(-0.3, 1) instead of uniform(0, 1).
// Throws numerical_error when the draw budget runs out.
Eigen::MatrixXd gen_random_mixing(int M, int K, MixingScenario scenario, std::uint64_t seed,
                                  bool mixed_sign = false, int budget = 10000);

// Isotropic noise spec sigma^2 I sized to X_clean's rows hitting the target
// SNR exactly.
NoiseSpec calibrate_noise_for_snr(const Eigen::MatrixXd& X_clean, double target_db);

// Non-negative source panels for the benchmark protocols. Correlated:
// half i.i.d. exponential(1), half |N(0, Sigma)| with 0.9 off-diagonal
// correlation. with_wgp additionally plants one pure column per source.
// Mixed: uniform(min_level, 1) everywhere, so no source ever dominates and
// no well-grounded points exist.
Eigen::MatrixXd gen_correlated_sources(int K, int N, std::uint64_t seed);
Eigen::MatrixXd gen_sources_with_wgp(int K, int N, std::uint64_t seed);
Eigen::MatrixXd gen_mixed_sources(int K, int N, double min_level, std::uint64_t seed);

} // namespace cam
