#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "shotkit/keyframes.hpp"
#include "shotkit/shots.hpp"
#include "shotkit/types.hpp"

namespace shotkit {

// How per-position variances across a shot's feature dims are aggregated.
enum class VarianceAggregate { mean_over_dims, l2_over_dims };

// Number of query positions kept per shot: ceil(rho * q), never below 1.
// A small epsilon guards against ceil() overshooting when rho * q is an
// exact integer that floating point renders as 12.000000000000002.
int retention_count(double rho, int q);

// Per-shot temporal variance analysis.
struct ShotVariance {
    ShotSpan shot;
    // One value per query position: population variance over the shot's
    // frames, aggregated over feature dims.
    std::vector<double> position_variance;
    // Top-m positions by variance (ties -> lower position), sorted ascending.
    std::vector<int> retained_positions;
    int m = 0;
};

struct VariancePlan {
    std::vector<ShotVariance> per_shot;
    double rho = 0.0;
};

// Scores every query position inside every shot and picks the top
// retention_count(rho, Q) positions per shot.  Requires rho in (0, 1] and a
// shot list that partitions the video's frames.
VariancePlan plan_variance(const VideoFeatures& video, const ShotList& shots, double rho,
                           VarianceAggregate aggregate = VarianceAggregate::mean_over_dims);

// Which (frame, position) tokens survive compression: keyframes keep every
// position; non-keyframes keep only the positions retained for their shot.
struct TokenSelection {
    int n_frames = 0;
    int n_positions = 0;
    // Row-major [N, Q] keep-mask.
    std::vector<std::uint8_t> mask;
    // (frame, position) per retained token, lexicographic order.
    std::vector<std::pair<int, int>> provenance;

    bool at(int frame, int position) const {
        return mask[static_cast<std::size_t>(frame) * n_positions + position] != 0;
    }
    std::int64_t retained_count() const { return static_cast<std::int64_t>(provenance.size()); }
};

struct CompressedVisual {
    // [S_v, D]: retained tokens in (frame, position) lexicographic order.
    FeatureTensor tokens;
    TokenSelection selection;
    // Source frame of each retained token; non-decreasing.
    std::vector<int> frame_of_token;
};

// Applies the selection rule: token (f, q) survives iff f is a keyframe
// (keyframes are kept whole) or q is retained in f's shot.  So
// S_v = sum over shots of [K_s * Q + (N_s - K_s) * m].  The keyframe set and
// plan must refer to the same video and shot list.
CompressedVisual compress(const VideoFeatures& video, const KeyframeSet& keyframes,
                          const VariancePlan& plan);

struct CompressionReport {
    std::int64_t retained = 0;       // S_v
    std::int64_t uncompressed = 0;   // N * Q
    double ratio = 0.0;              // retained / uncompressed
};

CompressionReport compression_report(const TokenSelection& selection);

}  // namespace shotkit
