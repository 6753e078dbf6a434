#include "shotkit/types.hpp"

#include <cmath>

namespace shotkit {

std::int64_t FeatureTensor::numel() const {
    std::int64_t n = 1;
    for (std::int64_t d : shape) n *= d;
    return n;
}

std::optional<Issue> validate_tensor(const FeatureTensor& tensor) {
    std::int64_t expected = 1;
    for (std::size_t axis = 0; axis < tensor.shape.size(); ++axis) {
        std::int64_t d = tensor.shape[axis];
        if (d < 0) {
            return Issue{ErrorCode::ShapeMismatch, static_cast<std::int64_t>(axis),
                         "negative dimension at axis " + std::to_string(axis)};
        }
        expected *= d;
    }
    if (expected != static_cast<std::int64_t>(tensor.data.size())) {
        return Issue{ErrorCode::ShapeMismatch, -1,
                     "shape implies " + std::to_string(expected) + " values, payload has " +
                         std::to_string(tensor.data.size())};
    }
    for (std::size_t i = 0; i < tensor.data.size(); ++i) {
        if (!std::isfinite(tensor.data[i])) {
            return Issue{ErrorCode::NonFiniteValue, static_cast<std::int64_t>(i),
                         "non-finite value at flat index " + std::to_string(i)};
        }
    }
    return std::nullopt;
}

void require_valid_tensor(const FeatureTensor& tensor) {
    if (auto issue = validate_tensor(tensor)) raise(*issue);
}

std::span<const float> VideoFeatures::frame_view(std::int64_t frame) const {
    const std::int64_t block = n_positions() * feat_dim();
    return std::span<const float>(frame_features.data.data() + frame * block,
                                  static_cast<std::size_t>(block));
}

std::optional<Issue> validate_video_features(const VideoFeatures& video) {
    if (video.frame_features.ndim() != 3) {
        return Issue{ErrorCode::ShapeMismatch, -1,
                     "frame features must be rank 3 [frames, positions, dims], got rank " +
                         std::to_string(video.frame_features.ndim())};
    }
    if (auto issue = validate_tensor(video.frame_features)) return issue;
    const std::int64_t n = video.n_frames();
    if (n < 1) return Issue{ErrorCode::ShapeMismatch, 0, "video must have at least one frame"};
    if (video.n_positions() < 1 || video.feat_dim() < 1) {
        return Issue{ErrorCode::ShapeMismatch, 1, "positions and feature dims must be >= 1"};
    }
    if (static_cast<std::int64_t>(video.frame_timestamps_s.size()) != n) {
        return Issue{ErrorCode::ShapeMismatch, -1,
                     "expected " + std::to_string(n) + " timestamps, got " +
                         std::to_string(video.frame_timestamps_s.size())};
    }
    if (!(video.duration_s > 0.0) || !std::isfinite(video.duration_s)) {
        return Issue{ErrorCode::ShapeMismatch, -1, "duration must be positive and finite"};
    }
    for (std::int64_t i = 0; i < n; ++i) {
        const double t = video.frame_timestamps_s[static_cast<std::size_t>(i)];
        if (!std::isfinite(t)) {
            return Issue{ErrorCode::NonFiniteValue, i,
                         "non-finite timestamp at frame " + std::to_string(i)};
        }
        if (t < 0.0) {
            return Issue{ErrorCode::NonMonotonicTimestamps, i,
                         "negative timestamp at frame " + std::to_string(i)};
        }
        if (i > 0 && !(t > video.frame_timestamps_s[static_cast<std::size_t>(i - 1)])) {
            return Issue{ErrorCode::NonMonotonicTimestamps, i,
                         "timestamps must be strictly increasing; violated at frame " +
                             std::to_string(i)};
        }
        if (t > video.duration_s) {
            return Issue{ErrorCode::NonMonotonicTimestamps, i,
                         "timestamp at frame " + std::to_string(i) + " exceeds duration"};
        }
    }
    return std::nullopt;
}

void require_valid_video(const VideoFeatures& video) {
    if (auto issue = validate_video_features(video)) raise(*issue);
}

const char* stream_kind_name(StreamKind kind) {
    switch (kind) {
        case StreamKind::mixed: return "mixed";
        case StreamKind::voice: return "voice";
        case StreamKind::ambient: return "ambient";
    }
    return "mixed";
}

StreamKind stream_kind_from_name(const std::string& name) {
    if (name == "mixed") return StreamKind::mixed;
    if (name == "voice") return StreamKind::voice;
    if (name == "ambient") return StreamKind::ambient;
    throw Error(ErrorCode::BadConfig, "unknown stream kind '" + name + "'");
}

std::optional<Issue> validate_audio_features(const AudioFeatures& audio) {
    if (audio.tokens.ndim() != 2) {
        return Issue{ErrorCode::ShapeMismatch, -1,
                     "audio tokens must be rank 2 [tokens, dims], got rank " +
                         std::to_string(audio.tokens.ndim())};
    }
    return validate_tensor(audio.tokens);
}

}  // namespace shotkit
