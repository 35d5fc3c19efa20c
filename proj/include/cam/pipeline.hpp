#pragma once

#include <Eigen/Dense>
#include <optional>

#include "cam/config.hpp"
#include "cam/edges.hpp"
#include "cam/preprocess.hpp"
#include "cam/stability.hpp"

namespace cam {

// Output of the full decomposition. A_hat and S_hat live in the original
// data scale (row scaling undone), so A_hat * S_hat approximates the input X
// directly. sources is empty when the mixing estimate is rank-deficient
// (more sources than mixtures); stability is filled only when K was chosen
// automatically.
struct DecomposeResult {
    Eigen::VectorXd row_scales;
    PreprocessReport report;
    SectorModel model;
    EdgeSet edges;                  // ray indices into model.rays
    MixingEstimate mixing;          // A_hat in original row scale, column convention applied
    std::optional<SourceEstimate> sources;
    std::optional<StabilityProfile> stability;
    int chosen_k = 0;
};

// Full pipeline: row scaling, small-norm filtering, optional stability-based
// K selection, sector clustering, duplicate-direction collapse, edge
// detection, K-edge selection, and source recovery over all N columns of the
// scaled data. Deterministic in (X, cfg).
DecomposeResult decompose(const Eigen::MatrixXd& X, const CamConfig& cfg);

} // namespace cam
