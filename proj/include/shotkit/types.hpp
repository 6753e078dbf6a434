#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shotkit/errors.hpp"

namespace shotkit {

// Dense row-major float32 tensor.  Values are stored in float32 exactly as
// they appear on disk; reductions elsewhere accumulate in float64.
struct FeatureTensor {
    std::vector<std::int64_t> shape;
    std::vector<float> data;

    std::int64_t ndim() const { return static_cast<std::int64_t>(shape.size()); }
    std::int64_t numel() const;
    std::int64_t dim(std::size_t axis) const { return shape.at(axis); }
};

// Checks shape/payload agreement and that every value is finite.
// Returns the first problem found, or nullopt when the tensor is sound.
std::optional<Issue> validate_tensor(const FeatureTensor& tensor);

// Throwing wrapper around validate_tensor.
void require_valid_tensor(const FeatureTensor& tensor);

// One video's worth of visual features: frame_features is [N, Q, D]
// (frames x query positions x feature dim), with one timestamp per frame.
struct VideoFeatures {
    std::string video_id;
    FeatureTensor frame_features;
    std::vector<double> frame_timestamps_s;
    double duration_s = 0.0;

    std::int64_t n_frames() const { return frame_features.ndim() == 3 ? frame_features.dim(0) : 0; }
    std::int64_t n_positions() const { return frame_features.ndim() == 3 ? frame_features.dim(1) : 0; }
    std::int64_t feat_dim() const { return frame_features.ndim() == 3 ? frame_features.dim(2) : 0; }

    // Contiguous [Q, D] block of one frame.
    std::span<const float> frame_view(std::int64_t frame) const;
};

// Structural validation: rank 3, N >= 1, one timestamp per frame, strictly
// increasing timestamps inside [0, duration_s], finite values everywhere.
// Issue::index names the offending flat element (data) or frame (timestamps).
std::optional<Issue> validate_video_features(const VideoFeatures& video);

void require_valid_video(const VideoFeatures& video);

// Token stream for one audio track: tokens is [T, D_a].
enum class StreamKind { mixed, voice, ambient };

const char* stream_kind_name(StreamKind kind);
StreamKind stream_kind_from_name(const std::string& name);

struct AudioFeatures {
    std::string video_id;
    FeatureTensor tokens;
    StreamKind stream_kind = StreamKind::mixed;

    std::int64_t n_tokens() const { return tokens.ndim() == 2 ? tokens.dim(0) : 0; }
    std::int64_t dim() const { return tokens.ndim() == 2 ? tokens.dim(1) : 0; }
};

std::optional<Issue> validate_audio_features(const AudioFeatures& audio);

}  // namespace shotkit
