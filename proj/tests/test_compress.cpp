#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "shotkit/compress.hpp"
#include "shotkit/motion.hpp"

using namespace shotkit;

namespace {

KeyframeSet keyframes_for(const VideoFeatures& video, const ShotList& shots, int k,
                          double sigma = 1.0) {
    return select_keyframes(motion_series(video, sigma), shots, k);
}

}  // namespace

TEST_CASE("retention count is ceil(rho * q), at least one") {
    CHECK(retention_count(0.25, 32) == 8);
    CHECK(retention_count(1.0, 32) == 32);
    CHECK(retention_count(0.5, 10) == 5);
    CHECK(retention_count(0.26, 32) == 9);  // genuine ceil
    CHECK(retention_count(0.01, 4) == 1);   // floor of one
    // 0.07 * 100 evaluates to 7.000000000000001; ceil must not overshoot.
    CHECK(retention_count(0.07, 100) == 7);
    CHECK_THROWS_AS(retention_count(0.0, 8), Error);
    CHECK_THROWS_AS(retention_count(1.5, 8), Error);
    CHECK_THROWS_AS(retention_count(-0.1, 8), Error);
}

TEST_CASE("position variance: constant position scores zero, spread scores its variance") {
    // Q=2, D=1.  Position 0 constant at 2; position 1 takes 0, 3, 6.
    const VideoFeatures video = test::make_video(3, 2, 1, {2, 0, 2, 3, 2, 6});
    const ShotList shots = test::shots_of({{0, 2}});
    const VariancePlan plan = plan_variance(video, shots, 0.5);
    REQUIRE(plan.per_shot.size() == 1);
    const ShotVariance& sv = plan.per_shot[0];
    REQUIRE(sv.position_variance.size() == 2);
    CHECK(sv.position_variance[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sv.position_variance[1] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(sv.m == 1);
    CHECK(sv.retained_positions == std::vector<int>{1});
}

TEST_CASE("variance plan matches the two-pass oracle on random instances") {
    Rng rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 8));
        const int q = static_cast<int>(rng.uniform_int(1, 4));
        const int d = static_cast<int>(rng.uniform_int(1, 3));
        const VideoFeatures video = test::random_video(rng, n, q, d, 4.0);
        const ShotList shots = test::random_shots(rng, n, 3);
        const double rho = 0.1 + 0.9 * rng.uniform();
        const VariancePlan plan = plan_variance(video, shots, rho);

        REQUIRE(plan.per_shot.size() == shots.spans.size());
        for (std::size_t s = 0; s < shots.spans.size(); ++s) {
            const ShotVariance& sv = plan.per_shot[s];
            REQUIRE(sv.position_variance.size() == static_cast<std::size_t>(q));
            for (int pos = 0; pos < q; ++pos) {
                const double want =
                    oracle::position_variance_direct(video, shots.spans[s], pos);
                CHECK(sv.position_variance[static_cast<std::size_t>(pos)] ==
                      doctest::Approx(want).epsilon(1e-9));
            }
            CHECK(sv.retained_positions ==
                  oracle::top_m_direct(sv.position_variance, sv.m));
            CHECK(sv.m == retention_count(rho, q));
        }
    }
}

TEST_CASE("variance ties break toward the lower position") {
    // Both positions identical -> same variance -> position 0 wins at m=1.
    const VideoFeatures video = test::make_video(2, 2, 1, {0, 0, 4, 4});
    const VariancePlan plan = plan_variance(video, test::shots_of({{0, 1}}), 0.5);
    CHECK(plan.per_shot[0].retained_positions == std::vector<int>{0});
}

TEST_CASE("mask rule: keyframes keep all positions, others keep the shot's picks") {
    // One shot of 4 frames, Q=2; make frame 2 the sole keyframe.
    std::vector<float> frames = {0, 0, 9, 0};
    const VideoFeatures video = test::make_video_per_frame(frames, 2, 1);
    const ShotList shots = test::shots_of({{0, 3}});
    const KeyframeSet keys = keyframes_for(video, shots, 1, 0.0);
    REQUIRE(keys.indices == std::vector<int>{2});
    const VariancePlan plan = plan_variance(video, shots, 0.5);  // m = 1
    const CompressedVisual out = compress(video, keys, plan);

    const int kept_position = plan.per_shot[0].retained_positions[0];
    for (int f = 0; f < 4; ++f) {
        for (int q = 0; q < 2; ++q) {
            const bool expect = f == 2 || q == kept_position;
            CHECK(out.selection.at(f, q) == expect);
        }
    }
    CHECK(out.selection.retained_count() == 2 + 3 * 1);
}

TEST_CASE("compressed tokens preserve values in (frame, position) order") {
    Rng rng(67);
    const VideoFeatures video = test::random_video(rng, 6, 3, 2);
    const ShotList shots = test::shots_of({{0, 2}, {3, 5}});
    const KeyframeSet keys = keyframes_for(video, shots, 2);
    const VariancePlan plan = plan_variance(video, shots, 0.34);
    const CompressedVisual out = compress(video, keys, plan);

    REQUIRE(out.tokens.shape.size() == 2);
    CHECK(out.tokens.dim(0) == out.selection.retained_count());
    CHECK(out.tokens.dim(1) == 2);
    CHECK(std::is_sorted(out.frame_of_token.begin(), out.frame_of_token.end()));
    CHECK(std::is_sorted(out.selection.provenance.begin(), out.selection.provenance.end()));

    for (std::size_t t = 0; t < out.selection.provenance.size(); ++t) {
        const auto [f, q] = out.selection.provenance[t];
        CHECK(out.frame_of_token[t] == f);
        for (int dim = 0; dim < 2; ++dim) {
            const std::size_t src = static_cast<std::size_t>((f * 3 + q) * 2 + dim);
            CHECK(out.tokens.data[t * 2 + static_cast<std::size_t>(dim)] ==
                  video.frame_features.data[src]);
        }
    }
}

TEST_CASE("retained count obeys the per-shot closed form") {
    Rng rng(71);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 40));
        const int q = static_cast<int>(rng.uniform_int(1, 8));
        const VideoFeatures video = test::random_video(rng, n, q, 2);
        const ShotList shots = test::random_shots(rng, n, 6);
        const int k = static_cast<int>(rng.uniform_int(1, n));
        const double rho = 0.1 + 0.9 * rng.uniform();
        const KeyframeSet keys = keyframes_for(video, shots, k);
        const VariancePlan plan = plan_variance(video, shots, rho);
        const CompressedVisual out = compress(video, keys, plan);

        const int m = retention_count(rho, q);
        CHECK(out.selection.retained_count() ==
              oracle::retained_count_direct(shots, keys.indices, q, m));

        // The report mirrors the mask.
        const CompressionReport report = compression_report(out.selection);
        CHECK(report.retained == out.selection.retained_count());
        CHECK(report.uncompressed == static_cast<std::int64_t>(n) * q);
        CHECK(report.ratio ==
              doctest::Approx(static_cast<double>(report.retained) /
                              static_cast<double>(report.uncompressed)));

        // Mask popcount equals the provenance length.
        std::int64_t popcount = 0;
        for (std::uint8_t bit : out.selection.mask) popcount += bit != 0;
        CHECK(popcount == out.selection.retained_count());
    }
}

TEST_CASE("reference configuration compresses 2560 tokens to 1408") {
    // Single shot, N=80, Q=32, k=32, rho=0.25: 32*32 + 48*8 = 1408.
    Rng rng(73);
    const VideoFeatures video = test::random_video(rng, 80, 32, 4);
    const ShotList shots = test::shots_of({{0, 79}});
    const KeyframeSet keys = keyframes_for(video, shots, 32);
    const VariancePlan plan = plan_variance(video, shots, 0.25);
    const CompressedVisual out = compress(video, keys, plan);
    CHECK(out.selection.retained_count() == 1408);
    const CompressionReport report = compression_report(out.selection);
    CHECK(report.uncompressed == 2560);
    CHECK(report.ratio == doctest::Approx(0.55).epsilon(1e-12));
}

TEST_CASE("rho of one keeps every token") {
    Rng rng(79);
    const VideoFeatures video = test::random_video(rng, 10, 4, 2);
    const ShotList shots = test::shots_of({{0, 9}});
    const KeyframeSet keys = keyframes_for(video, shots, 2);
    const VariancePlan plan = plan_variance(video, shots, 1.0);
    const CompressedVisual out = compress(video, keys, plan);
    CHECK(out.selection.retained_count() == 40);
    CHECK(compression_report(out.selection).ratio == doctest::Approx(1.0));
}
