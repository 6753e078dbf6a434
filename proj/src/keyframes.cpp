#include "shotkit/keyframes.hpp"

#include <algorithm>
#include <numeric>

namespace shotkit {

namespace {

// Indices of the j largest scores among [first, last], ties toward the lower
// index, marked into `selected`.
void mark_top(const std::vector<double>& score, int first, int last, int j,
              std::vector<char>& selected) {
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(last - first + 1));
    for (int f = first; f <= last; ++f) order.push_back(f);
    std::stable_sort(order.begin(), order.end(), [&score](int a, int b) {
        return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    });
    for (int i = 0; i < j; ++i) {
        selected[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
    }
}

// k split across shots proportionally to length.  Largest-remainder rounding;
// remainder ties go to the earlier shot.  Quotas never exceed shot length
// because k <= N implies k * len / N <= len.
std::vector<int> proportional_quotas(const std::vector<ShotSpan>& spans, int k, int n) {
    const std::size_t s = spans.size();
    std::vector<int> quota(s, 0);
    std::vector<double> remainder(s, 0.0);
    int assigned = 0;
    for (std::size_t i = 0; i < s; ++i) {
        const double ideal =
            static_cast<double>(k) * static_cast<double>(spans[i].length()) / static_cast<double>(n);
        quota[i] = static_cast<int>(ideal);
        remainder[i] = ideal - static_cast<double>(quota[i]);
        assigned += quota[i];
    }
    std::vector<std::size_t> by_remainder(s);
    std::iota(by_remainder.begin(), by_remainder.end(), std::size_t{0});
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&remainder](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < k && i < s; ++i) {
        const std::size_t shot = by_remainder[i];
        if (quota[shot] < spans[shot].length()) {
            ++quota[shot];
            ++assigned;
        }
    }
    return quota;
}

}  // namespace

KeyframeSet select_keyframes(const MotionSeries& series, const ShotList& shots, int k,
                             KeyframeScope scope) {
    const int n = static_cast<int>(series.smoothed.size());
    if (n < 1) throw Error(ErrorCode::OutOfRange, "motion series is empty");
    if (k < 1 || k > n) {
        throw Error(ErrorCode::InvalidK,
                    "k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
    }
    if (auto issue = validate_shot_list(shots, n)) raise(*issue);

    const std::vector<double>& score = series.smoothed;
    std::vector<char> selected(static_cast<std::size_t>(n), 0);

    if (scope == KeyframeScope::global_topk) {
        mark_top(score, 0, n - 1, k, selected);
    } else {
        const std::vector<int> quota = proportional_quotas(shots.spans, k, n);
        for (std::size_t i = 0; i < shots.spans.size(); ++i) {
            if (quota[i] > 0) {
                mark_top(score, shots.spans[i].first_frame, shots.spans[i].last_frame, quota[i],
                         selected);
            }
        }
    }

    // Anchor every shot the budget missed with its motion argmax.
    KeyframeSet result;
    result.k_requested = k;
    for (const ShotSpan& shot : shots.spans) {
        bool covered = false;
        for (int f = shot.first_frame; f <= shot.last_frame && !covered; ++f) {
            covered = selected[static_cast<std::size_t>(f)] != 0;
        }
        if (covered) continue;
        int anchor = shot.first_frame;
        for (int f = shot.first_frame + 1; f <= shot.last_frame; ++f) {
            if (score[static_cast<std::size_t>(f)] > score[static_cast<std::size_t>(anchor)]) {
                anchor = f;
            }
        }
        selected[static_cast<std::size_t>(anchor)] = 1;
        result.forced_anchors.push_back(anchor);
    }

    for (int f = 0; f < n; ++f) {
        if (selected[static_cast<std::size_t>(f)]) result.indices.push_back(f);
    }
    return result;
}

}  // namespace shotkit
