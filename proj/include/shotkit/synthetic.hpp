#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shotkit/manifest.hpp"
#include "shotkit/rng.hpp"
#include "shotkit/shots.hpp"
#include "shotkit/types.hpp"

namespace shotkit {

// Recipe for a synthetic dataset with known structure: piecewise-constant
// shot prototypes separated by large jumps, optional per-position temporal
// ramps (the "dynamic" positions variance analysis should keep), and
// Gaussian noise on top.
struct SyntheticSpec {
    int n_videos = 4;  // 0 is allowed: an empty dataset
    int n_frames = 40;        // N
    int n_positions = 8;      // Q
    int feat_dim = 8;         // D
    int shots_per_video = 3;  // planted shot count (>= 1)
    int min_shot_frames = 4;
    // Per-entry Gaussian noise.
    double noise_sigma = 0.0;
    // L2 distance between consecutive shot prototypes.
    double cut_magnitude = 10.0;
    // Positions that get a linear temporal ramp inside every shot; empty
    // leaves all positions statistically flat.
    std::vector<int> planted_dynamic_positions;
    // Peak-to-peak ramp height; <= 0 picks a height that dominates the noise.
    double ramp_amplitude = 0.0;
    // Timeline: frame centers at (i + 0.5) / fps, duration n_frames / fps.
    double fps = 2.0;
    // Ground-truth moments per query.
    int gt_windows = 1;
    // Audio: 0 tokens means no audio stream.
    std::int64_t audio_tokens = 0;
    std::int64_t audio_dim = 8;
    bool dual_audio = false;  // write voice + ambient instead of mixed
    std::uint64_t seed = 0;
};

// Everything the generator knows about one video, kept as the oracle for
// detection/selection tests.
struct PlantedTruth {
    std::string video_id;
    std::vector<ShotSpan> shots;
    std::vector<int> cut_frames;  // first frame of every shot but the first
    // Where the motion spikes live (the cut frames): what keyframe selection
    // should find first on clean data.
    std::vector<int> keyframes;
    std::vector<int> planted_positions;
};

// In-memory product of the generator for one video.
struct SyntheticVideo {
    VideoFeatures video;
    PlantedTruth truth;
};

// Deterministic single-video generator (the file-writing dataset generator
// and the tests both build on this).
SyntheticVideo make_synthetic_video(const SyntheticSpec& spec, const std::string& video_id,
                                    Rng& rng);

struct SyntheticDataset {
    std::vector<ManifestRecord> records;
    std::vector<PlantedTruth> truth;
    std::filesystem::path manifest_path;
};

// Writes tensors, the JSONL manifest (manifest.jsonl), and a truth sidecar
// (truth.json) into out_dir.  Fully determined by spec.seed.
SyntheticDataset generate_dataset(const SyntheticSpec& spec,
                                  const std::filesystem::path& out_dir);

}  // namespace shotkit
