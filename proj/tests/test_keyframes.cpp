#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "shotkit/keyframes.hpp"

using namespace shotkit;

namespace {

MotionSeries series_of(std::vector<double> smoothed) {
    MotionSeries series;
    series.raw = smoothed;
    series.smoothed = std::move(smoothed);
    series.sigma = 0.0;
    return series;
}

ShotList one_shot(int n) { return test::shots_of({{0, n - 1}}); }

}  // namespace

TEST_CASE("global top-k picks the highest motion frames, ties to lower index") {
    const MotionSeries series = series_of({0.0, 5.0, 5.0, 1.0, 5.0, 0.0});
    const KeyframeSet set = select_keyframes(series, one_shot(6), 2);
    CHECK(set.indices == std::vector<int>{1, 2});
    CHECK(set.forced_anchors.empty());
    CHECK(set.k_requested == 2);
}

TEST_CASE("uncovered shots get their argmax as a forced anchor") {
    // All the motion mass sits in the first shot; the second must be anchored.
    const MotionSeries series = series_of({9.0, 8.0, 7.0, 0.1, 0.3, 0.2});
    const ShotList shots = test::shots_of({{0, 2}, {3, 5}});
    const KeyframeSet set = select_keyframes(series, shots, 3);
    CHECK(set.indices == std::vector<int>{0, 1, 2, 4});
    CHECK(set.forced_anchors == std::vector<int>{4});
}

TEST_CASE("selection is sorted, unique, and covers every shot") {
    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 40));
        std::vector<double> values(static_cast<std::size_t>(n));
        for (double& v : values) v = rng.uniform_int(0, 4);  // heavy ties
        const ShotList shots = test::random_shots(rng, n, 6);
        const int k = static_cast<int>(rng.uniform_int(1, n));
        const KeyframeSet set = select_keyframes(series_of(values), shots, k);

        CHECK(std::is_sorted(set.indices.begin(), set.indices.end()));
        CHECK(std::adjacent_find(set.indices.begin(), set.indices.end()) == set.indices.end());
        CHECK(static_cast<int>(set.indices.size()) >= k);
        for (const ShotSpan& shot : shots.spans) {
            const bool covered = std::any_of(set.indices.begin(), set.indices.end(),
                                             [&](int f) { return shot.contains(f); });
            CHECK(covered);
        }
    }
}

TEST_CASE("global selection matches the brute-force oracle") {
    Rng rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 30));
        std::vector<double> values(static_cast<std::size_t>(n));
        // Mix continuous values with deliberate ties.
        for (double& v : values) {
            v = trial % 2 == 0 ? rng.normal() : static_cast<double>(rng.uniform_int(0, 3));
        }
        const ShotList shots = test::random_shots(rng, n, 5);
        const int k = static_cast<int>(rng.uniform_int(1, n));
        const KeyframeSet set = select_keyframes(series_of(values), shots, k);
        CHECK(set.indices == oracle::keyframes_direct(values, shots, k));
    }
}

TEST_CASE("per-shot scope splits the budget by largest remainder") {
    // Shots of 6, 3, 1 frames; k = 5 -> ideals 3.0, 1.5, 0.5 -> quotas 3, 2, 0
    // (the 1.5 remainder outranks the 0.5 one), and the third shot gets an
    // anchor on top.
    std::vector<double> values = {9, 8, 7, 6, 5, 4, 30, 20, 10, 1};
    const ShotList shots = test::shots_of({{0, 5}, {6, 8}, {9, 9}});
    const KeyframeSet set =
        select_keyframes(series_of(values), shots, 5, KeyframeScope::per_shot_quota);
    CHECK(set.indices == std::vector<int>{0, 1, 2, 6, 7, 9});
    CHECK(set.forced_anchors == std::vector<int>{9});
}

TEST_CASE("per-shot selection matches the brute-force oracle") {
    Rng rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 30));
        std::vector<double> values(static_cast<std::size_t>(n));
        for (double& v : values) {
            v = trial % 2 == 0 ? rng.normal() : static_cast<double>(rng.uniform_int(0, 3));
        }
        const ShotList shots = test::random_shots(rng, n, 5);
        const int k = static_cast<int>(rng.uniform_int(1, n));
        const KeyframeSet set =
            select_keyframes(series_of(values), shots, k, KeyframeScope::per_shot_quota);
        CHECK(set.indices == oracle::keyframes_per_shot_direct(values, shots, k));
    }
}

TEST_CASE("per-shot quotas sum to k and respect shot capacity") {
    Rng rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 40));
        const ShotList shots = test::random_shots(rng, n, 6);
        const int k = static_cast<int>(rng.uniform_int(1, n));
        const std::vector<int> quotas = oracle::quotas_direct(shots, k);
        int total = 0;
        for (std::size_t i = 0; i < quotas.size(); ++i) {
            CHECK(quotas[i] >= 0);
            CHECK(quotas[i] <= shots.spans[i].length());
            total += quotas[i];
        }
        CHECK(total == k);
    }
}

TEST_CASE("k equal to the frame count selects everything") {
    const MotionSeries series = series_of({3, 1, 4, 1, 5});
    for (KeyframeScope scope : {KeyframeScope::global_topk, KeyframeScope::per_shot_quota}) {
        const KeyframeSet set = select_keyframes(series, one_shot(5), 5, scope);
        CHECK(set.indices == std::vector<int>{0, 1, 2, 3, 4});
    }
}

TEST_CASE("selection rejects out-of-range k") {
    const MotionSeries series = series_of({1, 2, 3});
    CHECK_THROWS_AS(select_keyframes(series, one_shot(3), 0), Error);
    CHECK_THROWS_AS(select_keyframes(series, one_shot(3), 4), Error);
    try {
        select_keyframes(series, one_shot(3), 0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidK);
    }
}
