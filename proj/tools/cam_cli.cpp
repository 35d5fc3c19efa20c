// Command-line front end: dataset generation, decomposition, stability-based
// source-count selection, evaluation against ground truth, and Monte Carlo
// benchmark sweeps. All results are reproducible from the seed recorded in
// the emitted manifests; timing goes to stderr so result files stay
// byte-identical across reruns.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cam/config.hpp"
#include "cam/datagen.hpp"
#include "cam/errors.hpp"
#include "cam/matrix_io.hpp"
#include "cam/metrics.hpp"
#include "cam/parallel.hpp"
#include "cam/pipeline.hpp"
#include "cam/rng.hpp"
#include "cam/stability.hpp"

using nlohmann::json;

namespace {

double to_degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cam::io_error("cannot open '" + path + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw cam::io_error("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw cam::io_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw cam::io_error("failed writing '" + path + "'");
}

// CAM_CONFIG names a JSON file of default knobs; explicit flags still win.
void apply_env_config(cam::CamConfig& cfg) {
    const char* path = std::getenv("CAM_CONFIG");
    if (path == nullptr || *path == '\0') return;
    const json j = load_json(path);
    if (!j.is_object()) throw cam::validation_error("config file must hold a JSON object");
    if (j.contains("sectors")) cfg.sectors = j.at("sectors").get<int>();
    if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
    if (j.contains("remove_fraction")) cfg.remove_fraction = j.at("remove_fraction").get<double>();
    if (j.contains("dedup_tol")) cfg.dedup_tol = j.at("dedup_tol").get<double>();
    if (j.contains("k_max")) cfg.k_max = j.at("k_max").get<int>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("bb_threshold")) cfg.bb_threshold = j.at("bb_threshold").get<long>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
}

void add_config_flags(CLI::App* app, cam::CamConfig& cfg) {
    app->add_option("--sectors", cfg.sectors, "Sector count J for clustering")
        ->capture_default_str();
    app->add_option("--restarts", cfg.restarts, "Independent clustering restarts")
        ->capture_default_str();
    app->add_option("--tau", cfg.tau, "Edge removal threshold in radians")
        ->capture_default_str();
    app->add_option("--remove-fraction", cfg.remove_fraction,
                    "Fraction of smallest-norm points dropped")
        ->capture_default_str();
    app->add_option("--dedup-tol", cfg.dedup_tol,
                    "Colinear-ray collapse threshold in radians")
        ->capture_default_str();
    app->add_option("--trials", cfg.trials, "Cross-validation trials for stability analysis")
        ->capture_default_str();
    app->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    app->add_option("--bb-threshold", cfg.bb_threshold,
                    "Subset count above which edge selection branches and bounds")
        ->capture_default_str();
    app->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
}

json stability_to_json(const cam::StabilityProfile& p) {
    json j;
    j["k_range"] = p.k_range;
    j["nmi"] = p.nmi;
    j["trials"] = p.trials;
    j["chosen_k"] = p.chosen_k;
    auto matrix_rows = [](const Eigen::MatrixXd& m) {
        std::vector<std::vector<double>> rows;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            rows.emplace_back(m.row(i).begin(), m.row(i).end());
        }
        return rows;
    };
    j["per_trial_angles"] = matrix_rows(p.per_trial_angles);
    j["per_trial_rand_a"] = matrix_rows(p.per_trial_rand_a);
    j["per_trial_rand_b"] = matrix_rows(p.per_trial_rand_b);
    return j;
}

// ---------------------------------------------------------------- generate

struct ToyArgs {
    int n = 1600;
    std::uint64_t seed = 0;
    double noise_var = 0.07;
    std::string prefix;
};

void run_generate_toy(const ToyArgs& a) {
    cam::ToySpec spec;
    spec.n_points = a.n;
    spec.noise_variance = a.noise_var;
    const cam::ToyData data = cam::gen_toy(spec, a.seed);
    cam::save_matrix(a.prefix + "_X.txt", data.X);
    cam::save_matrix(a.prefix + "_A.txt", data.A_true);
    cam::save_matrix(a.prefix + "_S.txt", data.S_true);
    json manifest;
    manifest["command"] = "generate";
    manifest["mode"] = "toy";
    manifest["params"] = {{"n", a.n}, {"seed", a.seed}, {"noise_variance", a.noise_var}};
    manifest["outputs"] = {{"X", a.prefix + "_X.txt"},
                           {"A", a.prefix + "_A.txt"},
                           {"S", a.prefix + "_S.txt"}};
    save_json(a.prefix + "_manifest.json", manifest);
    const cam::NoiseSpec noise{a.noise_var * Eigen::Matrix3d::Identity(), 0};
    std::cerr << "generated toy dataset, SNR "
              << cam::snr_db(data.A_true * data.S_true, noise) << " dB\n";
}

struct MixArgs {
    std::string sources;
    std::string mixing;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    double noise_var = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;
    std::string prefix;
};

void run_generate_mix(const MixArgs& a) {
    const Eigen::MatrixXd S = cam::load_matrix(a.sources);
    const Eigen::MatrixXd A = cam::load_matrix(a.mixing);
    const bool want_snr = !std::isnan(a.snr_db);
    const bool want_var = !std::isnan(a.noise_var);
    if (want_snr && want_var) {
        throw cam::validation_error("give either --snr-db or --noise-var, not both");
    }
    cam::NoiseSpec noise;
    if (want_snr) {
        noise = cam::calibrate_noise_for_snr(A * S, a.snr_db);
    } else if (want_var) {
        noise.covariance =
            a.noise_var * Eigen::MatrixXd::Identity(A.rows(), A.rows());
    } else {
        noise.covariance = Eigen::MatrixXd::Zero(A.rows(), A.rows());
    }
    noise.seed = cam::derive_seed(a.seed, "noise");
    const Eigen::MatrixXd X = cam::mix(S, A, noise);
    cam::save_matrix(a.prefix + "_X.txt", X);
    json manifest;
    manifest["command"] = "generate";
    manifest["mode"] = "mix";
    manifest["params"] = {{"sources", a.sources},
                          {"mixing", a.mixing},
                          {"seed", a.seed}};
    if (want_snr) manifest["params"]["snr_db"] = a.snr_db;
    if (want_var) manifest["params"]["noise_variance"] = a.noise_var;
    manifest["outputs"] = {{"X", a.prefix + "_X.txt"}};
    save_json(a.prefix + "_manifest.json", manifest);
    if (want_snr || want_var) {
        std::cerr << "mixed " << A.rows() << "x" << S.cols() << " observations, SNR "
                  << cam::snr_db(A * S, noise) << " dB\n";
    }
}

struct RandomMixingArgs {
    int rows = 3;
    int cols = 3;
    std::string scenario = "exact";
    std::uint64_t seed = 0;
    bool mixed_sign = false;
    std::string out;
};

void run_generate_random_mixing(const RandomMixingArgs& a) {
    const Eigen::MatrixXd A =
        cam::gen_random_mixing(a.rows, a.cols, cam::parse_scenario(a.scenario), a.seed,
                               a.mixed_sign);
    cam::save_matrix(a.out, A);
    json manifest;
    manifest["command"] = "generate";
    manifest["mode"] = "random-mixing";
    manifest["params"] = {{"rows", a.rows},
                          {"cols", a.cols},
                          {"scenario", a.scenario},
                          {"seed", a.seed},
                          {"mixed_sign", a.mixed_sign}};
    manifest["outputs"] = {{"matrix", a.out}};
    save_json(a.out + ".manifest.json", manifest);
}

void run_generate_replay(const std::string& manifest_path) {
    const json m = load_json(manifest_path);
    if (!m.is_object() || m.value("command", "") != "generate") {
        throw cam::validation_error("'" + manifest_path + "' is not a generate manifest");
    }
    const std::string mode = m.value("mode", "");
    const json& p = m.at("params");
    if (mode == "toy") {
        ToyArgs a;
        a.n = p.at("n").get<int>();
        a.seed = p.at("seed").get<std::uint64_t>();
        a.noise_var = p.at("noise_variance").get<double>();
        const std::string x = m.at("outputs").at("X").get<std::string>();
        a.prefix = x.substr(0, x.size() - std::string("_X.txt").size());
        run_generate_toy(a);
    } else if (mode == "mix") {
        MixArgs a;
        a.sources = p.at("sources").get<std::string>();
        a.mixing = p.at("mixing").get<std::string>();
        if (p.contains("snr_db")) a.snr_db = p.at("snr_db").get<double>();
        if (p.contains("noise_variance")) a.noise_var = p.at("noise_variance").get<double>();
        a.seed = p.at("seed").get<std::uint64_t>();
        const std::string x = m.at("outputs").at("X").get<std::string>();
        a.prefix = x.substr(0, x.size() - std::string("_X.txt").size());
        run_generate_mix(a);
    } else if (mode == "random-mixing") {
        RandomMixingArgs a;
        a.rows = p.at("rows").get<int>();
        a.cols = p.at("cols").get<int>();
        a.scenario = p.at("scenario").get<std::string>();
        a.seed = p.at("seed").get<std::uint64_t>();
        a.mixed_sign = p.at("mixed_sign").get<bool>();
        a.out = m.at("outputs").at("matrix").get<std::string>();
        run_generate_random_mixing(a);
    } else {
        throw cam::validation_error("unknown generate mode '" + mode + "' in manifest");
    }
}

// --------------------------------------------------------------- decompose

struct DecomposeArgs {
    std::string input;
    std::string prefix;
    cam::CamConfig cfg;
};

void run_decompose(const DecomposeArgs& a) {
    const Eigen::MatrixXd X = cam::load_matrix(a.input);
    const auto t0 = std::chrono::steady_clock::now();
    const cam::DecomposeResult res = cam::decompose(X, a.cfg);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

    cam::save_matrix(a.prefix + "_A.txt", res.mixing.A_hat);
    if (res.sources) {
        cam::save_matrix(a.prefix + "_S.txt", res.sources->S_hat);
    }
    json out;
    out["input"] = a.input;
    out["chosen_k"] = res.chosen_k;
    out["fit_error"] = res.mixing.fit_error;
    out["selected_edges"] = res.mixing.selected_edges;
    out["edge_rays"] = res.edges.ray_indices;
    out["edge_count"] = res.edges.ray_indices.size();
    out["distortion"] = res.model.distortion;
    out["kept_points"] = res.report.kept_indices.size();
    out["removed_points"] = res.report.removed_count;
    out["sources_recovered"] = res.sources.has_value();
    out["config"] = {{"sectors", a.cfg.sectors},
                     {"restarts", a.cfg.restarts},
                     {"tau", a.cfg.tau},
                     {"remove_fraction", a.cfg.remove_fraction},
                     {"dedup_tol", a.cfg.dedup_tol},
                     {"k", a.cfg.k},
                     {"k_max", a.cfg.k_max},
                     {"trials", a.cfg.trials},
                     {"seed", a.cfg.seed},
                     {"bb_threshold", a.cfg.bb_threshold}};
    out["outputs"] = {{"A", a.prefix + "_A.txt"}};
    if (res.sources) out["outputs"]["S"] = a.prefix + "_S.txt";
    if (res.stability) out["stability"] = stability_to_json(*res.stability);
    save_json(a.prefix + "_result.json", out);

    std::cout << "K = " << res.chosen_k << ", " << res.edges.ray_indices.size()
              << " edges detected, fit error " << res.mixing.fit_error << "\n";
    std::cerr << "decompose: " << elapsed.count() << " s\n";
}

struct SelectKArgs {
    std::string input;
    std::string out;
    cam::CamConfig cfg;
};

void run_select_k(const SelectKArgs& a) {
    const Eigen::MatrixXd X = cam::load_matrix(a.input);
    const auto t0 = std::chrono::steady_clock::now();
    const auto [scaled, row_scales] = cam::unit_sum_scale(X);
    auto [filtered, report] = cam::filter_small_norms(scaled, a.cfg.remove_fraction);
    const cam::StabilityProfile profile =
        cam::stability_select(filtered, a.cfg.k_max, a.cfg.trials, a.cfg,
                              cam::derive_seed(a.cfg.seed, "stability"));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
    save_json(a.out, stability_to_json(profile));
    std::cout << "chosen K = " << profile.chosen_k << "\n";
    std::cerr << "select-k: " << elapsed.count() << " s\n";
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string truth_a;
    std::string est_a;
    std::string truth_s;
    std::string est_s;
    int markers = 0;
    std::string out;
};

void run_evaluate(const EvaluateArgs& a) {
    const Eigen::MatrixXd A_true = cam::load_matrix(a.truth_a);
    const Eigen::MatrixXd A_hat = cam::load_matrix(a.est_a);
    if (a.truth_s.empty() != a.est_s.empty()) {
        throw cam::validation_error("--truth-s and --est-s must be given together");
    }
    const cam::EvalResult mixing = cam::eval_mixing(A_true, A_hat);
    const double rad = (1.0 - mixing.E_A) * std::numbers::pi;

    json out;
    out["E_A"] = mixing.E_A;
    out["min_avg_angle_rad"] = rad;
    out["pairing"] = mixing.pairing;
    std::cout << "E_A = " << mixing.E_A << " (minimum average angle " << to_degrees(rad)
              << " degrees)\n";
    if (!a.truth_s.empty()) {
        const Eigen::MatrixXd S_true = cam::load_matrix(a.truth_s);
        const Eigen::MatrixXd S_hat = cam::load_matrix(a.est_s);
        const double es = cam::eval_sources(S_true, S_hat, mixing.pairing);
        out["E_S"] = es;
        std::cout << "E_S = " << es << "\n";
        if (a.markers > 0) {
            const double esm = cam::eval_marker_patterns(S_true, S_hat, mixing.pairing, a.markers);
            out["E_S_markers"] = esm;
            out["markers_per_source"] = a.markers;
            std::cout << "E_S over top " << a.markers << " markers per source = " << esm << "\n";
        }
    }
    if (!a.out.empty()) save_json(a.out, out);
}

// --------------------------------------------------------------- benchmark

struct BenchmarkArgs {
    std::string scenario = "exact";
    int rows = 4;
    int cols = 4;
    int n = 1000;
    std::vector<double> snr_levels;
    int replicates = 10;
    int markers = 100;
    bool select_k = false;
    std::string prefix;
    cam::CamConfig cfg;
};

struct ReplicateOutcome {
    std::string status = "ok";
    double e_a = std::numeric_limits<double>::quiet_NaN();
    double e_s = std::numeric_limits<double>::quiet_NaN();
    double e_s_markers = std::numeric_limits<double>::quiet_NaN();
    int chosen_k = 0;
    int edge_count = 0;
};

ReplicateOutcome run_replicate(const BenchmarkArgs& a, cam::MixingScenario scenario,
                               std::size_t snr_index, int rep) {
    ReplicateOutcome out;
    const std::uint64_t srep =
        cam::derive_seed(cam::derive_seed(a.cfg.seed, "snr", snr_index), "rep",
                         static_cast<std::uint64_t>(rep));
    const Eigen::MatrixXd S =
        cam::gen_correlated_sources(a.cols, a.n, cam::derive_seed(srep, "sources"));
    const Eigen::MatrixXd A =
        cam::gen_random_mixing(a.rows, a.cols, scenario, cam::derive_seed(srep, "mixing"));
    cam::NoiseSpec noise = cam::calibrate_noise_for_snr(A * S, a.snr_levels[snr_index]);
    noise.seed = cam::derive_seed(srep, "noise");
    const Eigen::MatrixXd X = cam::mix(S, A, noise);

    cam::CamConfig cfg = a.cfg;
    cfg.threads = 1;  // parallelism lives at the replicate level
    cfg.seed = cam::derive_seed(srep, "decompose");
    cfg.k = a.cols;
    const cam::DecomposeResult res = cam::decompose(X, cfg);
    out.edge_count = static_cast<int>(res.edges.ray_indices.size());

    const cam::EvalResult mixing = cam::eval_mixing(A, res.mixing.A_hat);
    out.e_a = mixing.E_A;
    if (res.sources) {
        out.e_s = cam::eval_sources(S, res.sources->S_hat, mixing.pairing);
        out.e_s_markers =
            cam::eval_marker_patterns(S, res.sources->S_hat, mixing.pairing, a.markers);
    }
    if (a.select_k) {
        const auto [scaled, row_scales] = cam::unit_sum_scale(X);
        auto [filtered, report] = cam::filter_small_norms(scaled, cfg.remove_fraction);
        const cam::StabilityProfile profile =
            cam::stability_select(filtered, cfg.k_max, cfg.trials, cfg,
                                  cam::derive_seed(cfg.seed, "stability"));
        out.chosen_k = profile.chosen_k;
    }
    return out;
}

std::string cell(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void run_benchmark(const BenchmarkArgs& a) {
    const cam::MixingScenario scenario = cam::parse_scenario(a.scenario);
    switch (scenario) {
        case cam::MixingScenario::exact:
            if (a.rows != a.cols) throw cam::validation_error("exact scenario needs rows = cols");
            break;
        case cam::MixingScenario::over:
            if (a.rows <= a.cols) throw cam::validation_error("over scenario needs rows > cols");
            break;
        case cam::MixingScenario::under:
            if (a.rows >= a.cols || a.rows < 3) {
                throw cam::validation_error("under scenario needs 3 <= rows < cols");
            }
            break;
    }
    if (a.snr_levels.empty()) throw cam::validation_error("at least one --snr-db level required");
    if (a.replicates < 1) throw cam::validation_error("--replicates must be positive");

    const std::size_t cells = a.snr_levels.size() * static_cast<std::size_t>(a.replicates);
    std::vector<ReplicateOutcome> outcomes(cells);
    const auto t0 = std::chrono::steady_clock::now();
    cam::parallel_for(cells, a.cfg.threads, [&](std::size_t c) {
        const std::size_t snr_index = c / static_cast<std::size_t>(a.replicates);
        const int rep = static_cast<int>(c % static_cast<std::size_t>(a.replicates));
        try {
            outcomes[c] = run_replicate(a, scenario, snr_index, rep);
        } catch (const std::exception& e) {
            outcomes[c].status = std::string("error: ") + e.what();
        }
    });
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

    std::ofstream reps(a.prefix + "_replicates.tsv");
    if (!reps) throw cam::io_error("cannot open '" + a.prefix + "_replicates.tsv' for writing");
    reps << "snr_db\treplicate\tstatus\tE_A\tE_S\tE_S_markers\tchosen_k\ttrue_k\tedges\n";
    for (std::size_t si = 0; si < a.snr_levels.size(); ++si) {
        for (int r = 0; r < a.replicates; ++r) {
            const auto& o = outcomes[si * static_cast<std::size_t>(a.replicates) +
                                     static_cast<std::size_t>(r)];
            reps << cell(a.snr_levels[si]) << "\t" << r << "\t" << o.status << "\t" << cell(o.e_a)
                 << "\t" << cell(o.e_s) << "\t" << cell(o.e_s_markers) << "\t"
                 << (o.chosen_k > 0 ? std::to_string(o.chosen_k) : "nan") << "\t" << a.cols
                 << "\t" << o.edge_count << "\n";
        }
    }
    reps.flush();
    if (!reps) throw cam::io_error("failed writing '" + a.prefix + "_replicates.tsv'");

    std::ofstream summary(a.prefix + "_summary.tsv");
    if (!summary) throw cam::io_error("cannot open '" + a.prefix + "_summary.tsv' for writing");
    summary << "snr_db\treplicates\tok\tmean_E_A\tmean_E_S\tmean_E_S_markers\torder_accuracy\n";
    for (std::size_t si = 0; si < a.snr_levels.size(); ++si) {
        int ok = 0;
        int correct_order = 0;
        double sum_a = 0.0;
        double sum_s = 0.0;
        double sum_m = 0.0;
        int with_sources = 0;
        for (int r = 0; r < a.replicates; ++r) {
            const auto& o = outcomes[si * static_cast<std::size_t>(a.replicates) +
                                     static_cast<std::size_t>(r)];
            if (o.status != "ok") continue;
            ++ok;
            sum_a += o.e_a;
            if (!std::isnan(o.e_s)) {
                sum_s += o.e_s;
                sum_m += o.e_s_markers;
                ++with_sources;
            }
            if (o.chosen_k == a.cols) ++correct_order;
        }
        summary << cell(a.snr_levels[si]) << "\t" << a.replicates << "\t" << ok << "\t"
                << cell(ok > 0 ? sum_a / ok : std::numeric_limits<double>::quiet_NaN()) << "\t"
                << cell(with_sources > 0 ? sum_s / with_sources
                                         : std::numeric_limits<double>::quiet_NaN())
                << "\t"
                << cell(with_sources > 0 ? sum_m / with_sources
                                         : std::numeric_limits<double>::quiet_NaN())
                << "\t"
                << cell(a.select_k && ok > 0 ? static_cast<double>(correct_order) / ok
                                             : std::numeric_limits<double>::quiet_NaN())
                << "\n";
    }
    summary.flush();
    if (!summary) throw cam::io_error("failed writing '" + a.prefix + "_summary.tsv'");
    std::cerr << "benchmark: " << cells << " replicates in " << elapsed.count() << " s\n";
}

// -------------------------------------------------------------------- main

int run(int argc, char** argv) {
    CLI::App app{"Convex analysis of mixtures: blind separation of non-negative sources"};
    app.require_subcommand(1);

    cam::CamConfig base;
    apply_env_config(base);

    // generate
    auto* generate = app.add_subcommand("generate", "Produce synthetic datasets");
    generate->require_subcommand(1);

    ToyArgs toy;
    auto* gen_toy_cmd = generate->add_subcommand("toy", "Three-source reference dataset");
    gen_toy_cmd->add_option("--n", toy.n, "Number of data points (even)")->capture_default_str();
    gen_toy_cmd->add_option("--seed", toy.seed, "Seed")->capture_default_str();
    gen_toy_cmd->add_option("--noise-var", toy.noise_var, "Isotropic noise variance")
        ->capture_default_str();
    gen_toy_cmd->add_option("--out-prefix", toy.prefix, "Output path prefix")->required();
    gen_toy_cmd->callback([&] { run_generate_toy(toy); });

    MixArgs mixargs;
    auto* gen_mix_cmd = generate->add_subcommand("mix", "Mix given sources with a given matrix");
    gen_mix_cmd->add_option("--sources", mixargs.sources, "Source matrix file (K x N)")
        ->required();
    gen_mix_cmd->add_option("--mixing", mixargs.mixing, "Mixing matrix file (M x K)")->required();
    gen_mix_cmd->add_option("--snr-db", mixargs.snr_db, "Calibrate white noise to this SNR");
    gen_mix_cmd->add_option("--noise-var", mixargs.noise_var, "Fixed isotropic noise variance");
    gen_mix_cmd->add_option("--seed", mixargs.seed, "Seed")->capture_default_str();
    gen_mix_cmd->add_option("--out-prefix", mixargs.prefix, "Output path prefix")->required();
    gen_mix_cmd->callback([&] { run_generate_mix(mixargs); });

    RandomMixingArgs rma;
    auto* gen_rm_cmd =
        generate->add_subcommand("random-mixing", "Constrained random mixing matrix");
    gen_rm_cmd->add_option("--rows", rma.rows, "Mixture count M")->capture_default_str();
    gen_rm_cmd->add_option("--cols", rma.cols, "Source count K")->capture_default_str();
    gen_rm_cmd->add_option("--scenario", rma.scenario, "exact | over | under")
        ->capture_default_str();
    gen_rm_cmd->add_option("--seed", rma.seed, "Seed")->capture_default_str();
    gen_rm_cmd->add_flag("--mixed-sign", rma.mixed_sign, "Allow negative entries");
    gen_rm_cmd->add_option("--out", rma.out, "Output matrix file")->required();
    gen_rm_cmd->callback([&] { run_generate_random_mixing(rma); });

    std::string replay_manifest;
    auto* gen_replay_cmd = generate->add_subcommand("replay", "Regenerate from a manifest");
    gen_replay_cmd->add_option("--manifest", replay_manifest, "Manifest file")->required();
    gen_replay_cmd->callback([&] { run_generate_replay(replay_manifest); });

    // decompose
    DecomposeArgs dec;
    dec.cfg = base;
    auto* decompose_cmd = app.add_subcommand("decompose", "Estimate mixing matrix and sources");
    decompose_cmd->add_option("--input", dec.input, "Observation matrix file")->required();
    decompose_cmd->add_option("--out-prefix", dec.prefix, "Output path prefix")->required();
    auto* k_opt =
        decompose_cmd->add_option("--k", dec.cfg.k, "Fixed source count (omit to select by stability)");
    auto* kmax_opt = decompose_cmd->add_option("--k-max", dec.cfg.k_max,
                                               "Largest K scanned when selecting automatically")
                         ->capture_default_str();
    k_opt->excludes(kmax_opt);
    kmax_opt->excludes(k_opt);
    add_config_flags(decompose_cmd, dec.cfg);
    decompose_cmd->callback([&] { run_decompose(dec); });

    // select-k
    SelectKArgs sel;
    sel.cfg = base;
    auto* select_cmd = app.add_subcommand("select-k", "Stability analysis only");
    select_cmd->add_option("--input", sel.input, "Observation matrix file")->required();
    select_cmd->add_option("--out", sel.out, "Profile JSON output")->required();
    select_cmd->add_option("--k-max", sel.cfg.k_max, "Largest K scanned")->capture_default_str();
    add_config_flags(select_cmd, sel.cfg);
    select_cmd->callback([&] { run_select_k(sel); });

    // evaluate
    EvaluateArgs ev;
    auto* eval_cmd = app.add_subcommand("evaluate", "Compare an estimate against ground truth");
    eval_cmd->add_option("--truth-a", ev.truth_a, "True mixing matrix file")->required();
    eval_cmd->add_option("--est-a", ev.est_a, "Estimated mixing matrix file")->required();
    eval_cmd->add_option("--truth-s", ev.truth_s, "True source matrix file");
    eval_cmd->add_option("--est-s", ev.est_s, "Estimated source matrix file");
    eval_cmd->add_option("--markers-per-source", ev.markers,
                         "Also score the top dominance markers per source");
    eval_cmd->add_option("--out", ev.out, "Results JSON output");
    eval_cmd->callback([&] { run_evaluate(ev); });

    // benchmark
    BenchmarkArgs bench;
    bench.cfg = base;
    auto* bench_cmd = app.add_subcommand("benchmark", "Monte Carlo sweep over SNR levels");
    bench_cmd->add_option("--scenario", bench.scenario, "exact | over | under")
        ->capture_default_str();
    bench_cmd->add_option("--rows", bench.rows, "Mixture count M")->capture_default_str();
    bench_cmd->add_option("--cols", bench.cols, "Source count K")->capture_default_str();
    bench_cmd->add_option("--n", bench.n, "Data points per replicate")->capture_default_str();
    bench_cmd->add_option("--snr-db", bench.snr_levels, "SNR levels in dB")
        ->required()
        ->delimiter(',');
    bench_cmd->add_option("--replicates", bench.replicates, "Replicates per SNR level")
        ->capture_default_str();
    bench_cmd->add_option("--markers-per-source", bench.markers,
                          "Markers per source for E_S_markers")
        ->capture_default_str();
    bench_cmd->add_flag("--select-k", bench.select_k,
                        "Also run stability selection per replicate");
    bench_cmd->add_option("--k-max", bench.cfg.k_max, "Largest K scanned by --select-k")
        ->capture_default_str();
    bench_cmd->add_option("--out-prefix", bench.prefix, "Output path prefix")->required();
    add_config_flags(bench_cmd, bench.cfg);
    bench_cmd->callback([&] { run_benchmark(bench); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version exit 0; anything else is an input problem.
        return app.exit(e) == 0 ? 0 : 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cam::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const cam::numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cam::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
