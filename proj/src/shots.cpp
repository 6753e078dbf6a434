#include "shotkit/shots.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

namespace shotkit {

int ShotList::shot_of(int frame) const {
    // spans are sorted and tile [0, N-1]; binary search on first_frame.
    auto it = std::upper_bound(spans.begin(), spans.end(), frame,
                               [](int f, const ShotSpan& s) { return f < s.first_frame; });
    if (it == spans.begin()) {
        throw Error(ErrorCode::OutOfRange, "frame " + std::to_string(frame) + " before first shot");
    }
    --it;
    if (!it->contains(frame)) {
        throw Error(ErrorCode::OutOfRange, "frame " + std::to_string(frame) + " not in any shot");
    }
    return static_cast<int>(it - spans.begin());
}

std::optional<Issue> validate_shot_list(const ShotList& shots, int n_frames) {
    if (n_frames < 1) return Issue{ErrorCode::OutOfRange, -1, "n_frames must be >= 1"};
    if (shots.spans.empty()) return Issue{ErrorCode::ShapeMismatch, -1, "shot list is empty"};
    int expected_first = 0;
    for (std::size_t i = 0; i < shots.spans.size(); ++i) {
        const ShotSpan& s = shots.spans[i];
        if (s.first_frame != expected_first) {
            return Issue{ErrorCode::ShapeMismatch, static_cast<std::int64_t>(i),
                         "shot " + std::to_string(i) + " starts at " +
                             std::to_string(s.first_frame) + ", expected " +
                             std::to_string(expected_first)};
        }
        if (s.last_frame < s.first_frame) {
            return Issue{ErrorCode::ShapeMismatch, static_cast<std::int64_t>(i),
                         "shot " + std::to_string(i) + " is empty"};
        }
        expected_first = s.last_frame + 1;
    }
    if (expected_first != n_frames) {
        return Issue{ErrorCode::ShapeMismatch,
                     static_cast<std::int64_t>(shots.spans.size()) - 1,
                     "shots cover " + std::to_string(expected_first) + " frames, video has " +
                         std::to_string(n_frames)};
    }
    return std::nullopt;
}

namespace {

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double population_std(std::span<const double> values, double mean) {
    double sum_sq = 0.0;
    for (double v : values) {
        const double d = v - mean;
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(values.size()));
}

// Merge shots shorter than min_len into their left neighbour; a runt first
// shot is absorbed by the shot that follows it.  The result still tiles the
// same frame range.
std::vector<ShotSpan> merge_runts(std::vector<ShotSpan> spans, int min_len) {
    if (min_len <= 1 || spans.size() < 2) return spans;
    std::vector<ShotSpan> merged;
    merged.reserve(spans.size());
    for (const ShotSpan& s : spans) {
        // Grow the previous span when either side is a runt; a runt first
        // span can only be at the back, so this also absorbs it forward.
        if (!merged.empty() && (merged.back().length() < min_len || s.length() < min_len)) {
            merged.back().last_frame = s.last_frame;
        } else {
            merged.push_back(s);
        }
    }
    return merged;
}

}  // namespace

ShotList detect_shots(std::span<const double> raw_motion, const ShotDetectConfig& config) {
    const std::int64_t n = static_cast<std::int64_t>(raw_motion.size());
    if (n < 1) throw Error(ErrorCode::OutOfRange, "motion series is empty");

    const std::vector<double> smoothed = gaussian_smooth(raw_motion, config.sigma);

    double threshold;
    if (config.threshold_mode == ShotDetectConfig::ThresholdMode::fixed) {
        threshold = config.fixed_threshold;
    } else {
        const double mean = mean_of(smoothed);
        threshold = mean + config.k_sigma * population_std(smoothed, mean);
    }

    std::vector<ShotSpan> spans;
    int start = 0;
    for (std::int64_t i = 1; i < n; ++i) {
        const double v = smoothed[static_cast<std::size_t>(i)];
        // Meets-or-exceeds, but a zero-motion frame is never a boundary: on a
        // constant video the adaptive threshold degenerates to 0 and every
        // frame would otherwise qualify.
        if (v >= threshold && v > 0.0) {
            spans.push_back({start, static_cast<int>(i) - 1});
            start = static_cast<int>(i);
        }
    }
    spans.push_back({start, static_cast<int>(n) - 1});

    ShotList shots;
    shots.spans = merge_runts(std::move(spans), config.min_shot_len);
    shots.source = ShotSource::detected;
    return shots;
}

ShotList detect_shots(const VideoFeatures& video, const ShotDetectConfig& config) {
    return detect_shots(frame_deltas(video), config);
}

ShotList import_shots(std::span<const int> boundaries, int n_frames) {
    if (n_frames < 1) throw Error(ErrorCode::OutOfRange, "n_frames must be >= 1");
    ShotList shots;
    shots.source = ShotSource::imported;
    int start = 0;
    int prev = 0;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        const int b = boundaries[i];
        if (b < 1 || b > n_frames - 1) {
            throw Error(ErrorCode::OutOfRange,
                        "boundary " + std::to_string(b) + " outside [1, " +
                            std::to_string(n_frames - 1) + "]");
        }
        if (i > 0 && b <= prev) {
            throw Error(ErrorCode::NonMonotonic,
                        "boundaries must be strictly increasing; violated at index " +
                            std::to_string(i));
        }
        shots.spans.push_back({start, b - 1});
        start = b;
        prev = b;
    }
    shots.spans.push_back({start, n_frames - 1});
    return shots;
}

ShotList read_shot_boundaries(const std::filesystem::path& path, int n_frames) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
    std::vector<int> boundaries;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // Tolerate trailing CR and surrounding spaces; skip blank lines.
        std::string trimmed;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        }
        if (trimmed.empty()) continue;
        try {
            std::size_t used = 0;
            const int value = std::stoi(trimmed, &used);
            if (used != trimmed.size()) throw std::invalid_argument("trailing junk");
            boundaries.push_back(value);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad boundary index at " + path.string() + ":" +
                                                   std::to_string(line_no) + ": '" + line + "'");
        }
    }
    return import_shots(boundaries, n_frames);
}

std::vector<int> shot_boundaries(const ShotList& shots) {
    std::vector<int> boundaries;
    for (std::size_t i = 1; i < shots.spans.size(); ++i) {
        boundaries.push_back(shots.spans[i].first_frame);
    }
    return boundaries;
}

}  // namespace shotkit
