#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "shotkit/types.hpp"

namespace shotkit {

// Fixed-budget average pooling of an audio token stream.
struct PooledAudio {
    // [S_a, D_a] with S_a = min(T, L).
    FeatureTensor tokens;
    // Half-open source range [begin, end) per pooled token; the ranges tile
    // [0, T) in order.
    std::vector<std::pair<std::int64_t, std::int64_t>> bin_map;
    StreamKind stream_kind = StreamKind::mixed;
};

// Pools T tokens down to S_a = min(T, L) bins; bin b covers
// [floor(b*T/S_a), floor((b+1)*T/S_a)) and its output is the arithmetic mean
// (float64 accumulation) of the covered tokens.  T <= L copies the stream
// bit-exactly.  Requires L >= 1; an empty stream pools to an empty stream.
PooledAudio pool_audio(const AudioFeatures& audio, std::int64_t l_budget);

// Pools voice and ambient streams independently, each with budget
// ceil(L/2), so the combined footprint never exceeds L + 1 tokens.
std::pair<PooledAudio, PooledAudio> pool_dual(const AudioFeatures& voice,
                                              const AudioFeatures& ambient,
                                              std::int64_t l_budget);

}  // namespace shotkit
