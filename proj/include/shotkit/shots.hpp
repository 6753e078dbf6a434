#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "shotkit/motion.hpp"
#include "shotkit/types.hpp"

namespace shotkit {

// Closed frame range [first_frame, last_frame] inside one video.
struct ShotSpan {
    int first_frame = 0;
    int last_frame = 0;

    int length() const { return last_frame - first_frame + 1; }
    bool contains(int frame) const { return frame >= first_frame && frame <= last_frame; }
    bool operator==(const ShotSpan&) const = default;
};

enum class ShotSource { detected, imported };

// Ordered, gap-free, non-overlapping partition of [0, N-1] into shots.
struct ShotList {
    std::vector<ShotSpan> spans;
    ShotSource source = ShotSource::detected;

    int n_shots() const { return static_cast<int>(spans.size()); }
    int n_frames() const { return spans.empty() ? 0 : spans.back().last_frame + 1; }
    // Index of the shot containing `frame` (frame must be in range).
    int shot_of(int frame) const;
};

// Verifies the partition property; Issue::index is the offending span.
std::optional<Issue> validate_shot_list(const ShotList& shots, int n_frames);

struct ShotDetectConfig {
    enum class ThresholdMode { adaptive, fixed };

    // Smoothing applied to the motion series before thresholding.  The
    // default keeps single-frame spikes intact so clean hard cuts land on
    // exactly one frame.
    double sigma = 0.0;
    ThresholdMode threshold_mode = ThresholdMode::adaptive;
    double fixed_threshold = 0.0;
    // adaptive threshold = mean(d) + k_sigma * population_std(d)
    double k_sigma = 3.0;
    // Shots shorter than this are merged into their neighbour.
    int min_shot_len = 2;
};

// Difference-based boundary detection.  Frame i >= 1 starts a new shot when
// its smoothed motion value meets or exceeds the threshold and is non-zero
// (a frame with literally no change is never a boundary, which keeps
// constant videos a single shot even though their adaptive threshold is 0).
// Runt shots are merged left into the previous shot; a runt first shot is
// absorbed by the following one.
ShotList detect_shots(const VideoFeatures& video, const ShotDetectConfig& config = {});

// Same detection, starting from a precomputed motion series (already
// smoothed or not, caller's choice of config.sigma still applies to `raw`).
ShotList detect_shots(std::span<const double> raw_motion, const ShotDetectConfig& config = {});

// Builds a ShotList from external boundary indices: each boundary b is the
// first frame of a new shot.  Boundaries must be sorted, unique, and inside
// [1, n_frames - 1]; an empty list yields the single shot [0, n_frames - 1].
ShotList import_shots(std::span<const int> boundaries, int n_frames);

// Reads one boundary index per line (blank lines ignored) and delegates to
// import_shots.
ShotList read_shot_boundaries(const std::filesystem::path& path, int n_frames);

// Boundary indices (first frame of every shot but the first).
std::vector<int> shot_boundaries(const ShotList& shots);

}  // namespace shotkit
