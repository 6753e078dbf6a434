#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shotkit/metrics.hpp"
#include "shotkit/pipeline.hpp"

namespace shotkit {

// Hyperparameter grid; the sweep visits the cartesian product in the listed
// order (N outermost, strategy innermost).
struct SweepGrid {
    std::vector<int> n_values = {80};
    std::vector<int> k_values = {32};
    std::vector<double> rho_values = {0.25};
    std::vector<std::int64_t> l_values = {150};
    std::vector<Strategy> strategies = {Strategy::overall};

    std::int64_t cardinality() const;
};

// Where predictions come from.  Real runs read them per grid point from
// predictions_dir/<N>_<k>_<rho>_<L>_<strategy>.jsonl; the stubs synthesize
// them from ground truth so the metric plumbing can be exercised (and
// calibrated) without a model: echo returns the ground truth, jitter returns
// ground truth degraded to a target IoU.
enum class PredictionSource { files, stub_echo, stub_jitter };

struct SweepOptions {
    PredictionSource source = PredictionSource::stub_echo;
    // Target IoU for stub_jitter (each ground-truth moment is shrunk
    // symmetrically to hit it exactly).
    double jitter_iou = 1.0;
    std::filesystem::path predictions_dir;
    PipelineConfig base;  // N/k/rho/L/strategy overridden per grid point
};

struct SweepRow {
    int n = 0;
    int k = 0;
    double rho = 0.0;
    std::int64_t l = 0;
    Strategy strategy = Strategy::overall;
    double r1_50 = 0.0;
    double r1_70 = 0.0;
    double map_50 = 0.0;
    double map_75 = 0.0;
    double miou = 0.0;
    double ratio = 0.0;  // mean compression ratio over the dataset
};

// File name a grid point's predictions are read from (files mode).
std::string sweep_point_filename(int n, int k, double rho, std::int64_t l, Strategy strategy);

// Runs the compression pipeline (for the ratio column) and the metric suite
// (for the quality columns) at every grid point.  Grid points whose
// prediction file is missing are skipped with a note in `skipped`; every
// other point yields one row.
struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> skipped;  // human-readable, one per skipped point
};

SweepResult run_sweep(std::span<const ManifestRecord> records,
                      const std::filesystem::path& manifest_path, const SweepGrid& grid,
                      const SweepOptions& options);

// CSV with the fixed header
//   N,k,rho,L,strategy,R1@0.5,R1@0.7,mAP@0.5,mAP@0.75,mIoU,ratio
std::string sweep_csv(std::span<const SweepRow> rows);

// Jitter stub used by the sweep and by calibration tests: shrinks a moment
// symmetrically so that IoU(original, shrunk) == target exactly.
Moment shrink_to_iou(const Moment& moment, double target_iou);

}  // namespace shotkit
