#include "shotkit/audio.hpp"

#include <algorithm>

namespace shotkit {

PooledAudio pool_audio(const AudioFeatures& audio, std::int64_t l_budget) {
    if (l_budget < 1) throw Error(ErrorCode::InvalidL, "token budget must be >= 1");
    if (auto issue = validate_audio_features(audio)) raise(*issue);

    const std::int64_t t = audio.n_tokens();
    const std::int64_t d = audio.dim();
    const std::int64_t s_a = std::min(t, l_budget);

    PooledAudio pooled;
    pooled.stream_kind = audio.stream_kind;
    pooled.tokens.shape = {s_a, d};
    if (s_a == 0) return pooled;  // silent stream pools to a silent stream

    pooled.tokens.data.reserve(static_cast<std::size_t>(s_a * d));
    pooled.bin_map.reserve(static_cast<std::size_t>(s_a));
    const float* base = audio.tokens.data.data();
    std::vector<double> acc(static_cast<std::size_t>(d));
    for (std::int64_t b = 0; b < s_a; ++b) {
        const std::int64_t begin = b * t / s_a;
        const std::int64_t end = (b + 1) * t / s_a;
        pooled.bin_map.emplace_back(begin, end);
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::int64_t i = begin; i < end; ++i) {
            const float* row = base + i * d;
            for (std::int64_t j = 0; j < d; ++j) acc[static_cast<std::size_t>(j)] += row[j];
        }
        const double inv = 1.0 / static_cast<double>(end - begin);
        for (std::int64_t j = 0; j < d; ++j) {
            pooled.tokens.data.push_back(
                static_cast<float>(acc[static_cast<std::size_t>(j)] * inv));
        }
    }
    return pooled;
}

std::pair<PooledAudio, PooledAudio> pool_dual(const AudioFeatures& voice,
                                              const AudioFeatures& ambient,
                                              std::int64_t l_budget) {
    if (l_budget < 1) throw Error(ErrorCode::InvalidL, "token budget must be >= 1");
    if (voice.stream_kind != StreamKind::voice || ambient.stream_kind != StreamKind::ambient) {
        throw Error(ErrorCode::InconsistentInputs,
                    "pool_dual expects a voice stream and an ambient stream");
    }
    const std::int64_t half = (l_budget + 1) / 2;  // ceil(L / 2) each
    return {pool_audio(voice, half), pool_audio(ambient, half)};
}

}  // namespace shotkit
