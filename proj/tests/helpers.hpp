#pragma once

// Fixture builders shared across the unit tests.

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "shotkit/rng.hpp"
#include "shotkit/shots.hpp"
#include "shotkit/types.hpp"

namespace shotkit::test {

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("shotkit_test_" + tag + "_" + std::to_string(++counter) + "_" +
                 std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

// Video with frame-center timestamps at the given fps and row-major values.
inline VideoFeatures make_video(int n, int q, int d, std::vector<float> values,
                                double fps = 2.0) {
    VideoFeatures video;
    video.video_id = "test";
    video.frame_features.shape = {n, q, d};
    video.frame_features.data = std::move(values);
    video.frame_timestamps_s.resize(static_cast<std::size_t>(n));
    for (int f = 0; f < n; ++f) {
        video.frame_timestamps_s[static_cast<std::size_t>(f)] = (f + 0.5) / fps;
    }
    video.duration_s = n / fps;
    return video;
}

// Convenience: one value per frame, broadcast across positions and dims.
inline VideoFeatures make_video_per_frame(std::vector<float> frame_values, int q = 1,
                                          int d = 1, double fps = 2.0) {
    const int n = static_cast<int>(frame_values.size());
    std::vector<float> values;
    values.reserve(static_cast<std::size_t>(n) * q * d);
    for (float v : frame_values) {
        for (int j = 0; j < q * d; ++j) values.push_back(v);
    }
    return make_video(n, q, d, std::move(values), fps);
}

inline VideoFeatures random_video(Rng& rng, int n, int q, int d, double scale = 1.0) {
    std::vector<float> values(static_cast<std::size_t>(n) * q * d);
    for (float& v : values) v = static_cast<float>(rng.normal(0.0, scale));
    return make_video(n, q, d, std::move(values));
}

inline AudioFeatures make_audio(int t, int d, std::vector<float> values,
                                StreamKind kind = StreamKind::mixed) {
    AudioFeatures audio;
    audio.video_id = "test";
    audio.tokens.shape = {t, d};
    audio.tokens.data = std::move(values);
    audio.stream_kind = kind;
    return audio;
}

inline AudioFeatures random_audio(Rng& rng, int t, int d,
                                  StreamKind kind = StreamKind::mixed) {
    std::vector<float> values(static_cast<std::size_t>(t) * d);
    for (float& v : values) v = static_cast<float>(rng.normal());
    return make_audio(t, d, std::move(values), kind);
}

inline ShotList shots_of(const std::vector<std::pair<int, int>>& spans) {
    ShotList shots;
    for (const auto& [first, last] : spans) shots.spans.push_back(ShotSpan{first, last});
    return shots;
}

// Random partition of [0, n) into 1..max_shots spans.
inline ShotList random_shots(Rng& rng, int n, int max_shots) {
    const int target = static_cast<int>(rng.uniform_int(1, std::min(max_shots, n)));
    std::vector<int> cuts;
    while (static_cast<int>(cuts.size()) < target - 1) {
        const int c = static_cast<int>(rng.uniform_int(1, n - 1));
        bool dup = false;
        for (int existing : cuts) dup = dup || existing == c;
        if (!dup) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    ShotList shots;
    int first = 0;
    for (int c : cuts) {
        shots.spans.push_back(ShotSpan{first, c - 1});
        first = c;
    }
    shots.spans.push_back(ShotSpan{first, n - 1});
    return shots;
}

}  // namespace shotkit::test
