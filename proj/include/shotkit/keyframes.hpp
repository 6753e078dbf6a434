#pragma once

#include <vector>

#include "shotkit/motion.hpp"
#include "shotkit/shots.hpp"

namespace shotkit {

// How the keyframe budget k is spent across the video.
enum class KeyframeScope {
    // One global top-k over all frames (the default).
    global_topk,
    // k split across shots proportionally to shot length (largest-remainder
    // rounding, ties toward the earlier shot), then top-quota within each shot.
    per_shot_quota,
};

// Keyframe selection over one video's smoothed motion series.
struct KeyframeSet {
    // Final selection, sorted ascending, unique.  Size is >= k (k plus any
    // per-shot anchors added for shots the global top-k missed).
    std::vector<int> indices;
    // Anchors that were added on top of the global top-k.
    std::vector<int> forced_anchors;
    int k_requested = 0;
};

// Top frames by smoothed motion value (ties -> lower index), spent globally
// or per shot depending on scope, plus one anchor per uncovered shot (its
// motion argmax, ties -> lower index) so every shot contributes at least one
// keyframe.  Requires 1 <= k <= N and a shot list partitioning the same N
// frames.
KeyframeSet select_keyframes(const MotionSeries& series, const ShotList& shots, int k,
                             KeyframeScope scope = KeyframeScope::global_topk);

}  // namespace shotkit
