#pragma once

#include <cstdint>

namespace cam {

// Knobs shared by the full decomposition and the stability sub-pipelines.
// Defaults follow the reference experimental protocol for small mixtures.
struct CamConfig {
    int sectors = 30;             // J, central-ray count for sector clustering
    int restarts = 20;            // independent clustering restarts
    double tau = 1e-3;            // edge-detection removal threshold, radians
    double remove_fraction = 0.5; // small-norm points dropped before analysis
    double dedup_tol = 1e-9;      // colinear-ray collapse threshold, radians
    int k = 0;                    // source count; 0 = pick by stability analysis
    int k_max = 8;                // largest K scanned by stability analysis
    int trials = 30;              // cross-validation trial count L
    std::uint64_t seed = 0;       // master seed; all child seeds derive from it
    long bb_threshold = 50000;    // subset count above which selection branches and bounds
    int threads = 1;              // worker threads for trials / replicates
};

} // namespace cam
