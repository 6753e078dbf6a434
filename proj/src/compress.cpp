#include "shotkit/compress.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shotkit {

int retention_count(double rho, int q) {
    if (!(rho > 0.0) || rho > 1.0 || !std::isfinite(rho)) {
        throw Error(ErrorCode::InvalidRho, "rho must be in (0, 1]");
    }
    if (q < 1) throw Error(ErrorCode::OutOfRange, "q must be >= 1");
    // The epsilon absorbs cases where rho * q should be an exact integer but
    // floating point lands a hair above it (0.1 * 30 = 3.0000000000000004).
    const int m = static_cast<int>(std::ceil(rho * static_cast<double>(q) - 1e-9));
    return std::clamp(m, 1, q);
}

VariancePlan plan_variance(const VideoFeatures& video, const ShotList& shots, double rho,
                           VarianceAggregate aggregate) {
    require_valid_video(video);
    if (!(rho > 0.0) || rho > 1.0 || !std::isfinite(rho)) {
        throw Error(ErrorCode::InvalidRho, "rho must be in (0, 1]");
    }
    const int n = static_cast<int>(video.n_frames());
    if (auto issue = validate_shot_list(shots, n)) raise(*issue);

    const std::int64_t q = video.n_positions();
    const std::int64_t d = video.feat_dim();
    const std::int64_t block = q * d;
    const float* base = video.frame_features.data.data();
    const int m = retention_count(rho, static_cast<int>(q));

    VariancePlan plan;
    plan.rho = rho;
    plan.per_shot.reserve(shots.spans.size());

    // Scratch accumulators, reused across shots.
    std::vector<double> sum(static_cast<std::size_t>(block));
    std::vector<double> sum_sq(static_cast<std::size_t>(block));

    for (const ShotSpan& shot : shots.spans) {
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(sum_sq.begin(), sum_sq.end(), 0.0);
        const std::int64_t frames = shot.length();
        for (int f = shot.first_frame; f <= shot.last_frame; ++f) {
            const float* row = base + static_cast<std::int64_t>(f) * block;
            for (std::int64_t j = 0; j < block; ++j) {
                const double v = static_cast<double>(row[j]);
                sum[static_cast<std::size_t>(j)] += v;
                sum_sq[static_cast<std::size_t>(j)] += v * v;
            }
        }

        ShotVariance sv;
        sv.shot = shot;
        sv.position_variance.resize(static_cast<std::size_t>(q));
        const double inv_frames = 1.0 / static_cast<double>(frames);
        for (std::int64_t p = 0; p < q; ++p) {
            double agg = 0.0;
            for (std::int64_t j = p * d; j < (p + 1) * d; ++j) {
                const double mean = sum[static_cast<std::size_t>(j)] * inv_frames;
                // Population variance; clamp tiny negative round-off to 0.
                double var = sum_sq[static_cast<std::size_t>(j)] * inv_frames - mean * mean;
                if (var < 0.0) var = 0.0;
                agg += (aggregate == VarianceAggregate::l2_over_dims) ? var * var : var;
            }
            sv.position_variance[static_cast<std::size_t>(p)] =
                (aggregate == VarianceAggregate::l2_over_dims)
                    ? std::sqrt(agg)
                    : agg / static_cast<double>(d);
        }

        // Top-m positions by variance, ties toward the lower position.
        std::vector<int> order(static_cast<std::size_t>(q));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&sv](int a, int b) {
            return sv.position_variance[static_cast<std::size_t>(a)] >
                   sv.position_variance[static_cast<std::size_t>(b)];
        });
        sv.m = m;
        sv.retained_positions.assign(order.begin(), order.begin() + m);
        std::sort(sv.retained_positions.begin(), sv.retained_positions.end());
        plan.per_shot.push_back(std::move(sv));
    }
    return plan;
}

CompressedVisual compress(const VideoFeatures& video, const KeyframeSet& keyframes,
                          const VariancePlan& plan) {
    require_valid_video(video);
    const int n = static_cast<int>(video.n_frames());
    const int q = static_cast<int>(video.n_positions());
    const std::int64_t d = video.feat_dim();

    // The plan's shots must tile this video.
    ShotList shots;
    for (const ShotVariance& sv : plan.per_shot) shots.spans.push_back(sv.shot);
    if (auto issue = validate_shot_list(shots, n)) {
        raise(Issue{ErrorCode::InconsistentInputs, issue->index,
                    "variance plan does not match the video: " + issue->message});
    }
    if (keyframes.indices.empty()) {
        throw Error(ErrorCode::InconsistentInputs, "keyframe set is empty");
    }
    for (std::size_t i = 0; i < keyframes.indices.size(); ++i) {
        const int f = keyframes.indices[i];
        if (f < 0 || f >= n) {
            throw Error(ErrorCode::InconsistentInputs,
                        "keyframe index " + std::to_string(f) + " outside [0, " +
                            std::to_string(n - 1) + "]");
        }
        if (i > 0 && f <= keyframes.indices[i - 1]) {
            throw Error(ErrorCode::InconsistentInputs,
                        "keyframe indices must be sorted and unique");
        }
    }

    CompressedVisual out;
    out.selection.n_frames = n;
    out.selection.n_positions = q;
    out.selection.mask.assign(static_cast<std::size_t>(n) * q, 0);

    std::vector<char> is_keyframe(static_cast<std::size_t>(n), 0);
    for (int f : keyframes.indices) is_keyframe[static_cast<std::size_t>(f)] = 1;

    // Keyframes survive whole; other frames keep their shot's retained
    // positions.  Walking frames in order yields lexicographic provenance.
    const float* base = video.frame_features.data.data();
    const std::int64_t block = static_cast<std::int64_t>(q) * d;
    auto keep = [&](int f, int p) {
        out.selection.mask[static_cast<std::size_t>(f) * q + p] = 1;
        out.selection.provenance.emplace_back(f, p);
        out.frame_of_token.push_back(f);
        const float* src =
            base + static_cast<std::int64_t>(f) * block + static_cast<std::int64_t>(p) * d;
        out.tokens.data.insert(out.tokens.data.end(), src, src + d);
    };
    int shot_index = 0;
    for (int f = 0; f < n; ++f) {
        while (!shots.spans[static_cast<std::size_t>(shot_index)].contains(f)) ++shot_index;
        if (is_keyframe[static_cast<std::size_t>(f)]) {
            for (int p = 0; p < q; ++p) keep(f, p);
        } else {
            const ShotVariance& sv = plan.per_shot[static_cast<std::size_t>(shot_index)];
            for (int p : sv.retained_positions) keep(f, p);
        }
    }
    out.tokens.shape = {static_cast<std::int64_t>(out.selection.provenance.size()), d};
    return out;
}

CompressionReport compression_report(const TokenSelection& selection) {
    CompressionReport report;
    report.retained = selection.retained_count();
    report.uncompressed =
        static_cast<std::int64_t>(selection.n_frames) * selection.n_positions;
    report.ratio = report.uncompressed == 0
                       ? 0.0
                       : static_cast<double>(report.retained) /
                             static_cast<double>(report.uncompressed);
    return report;
}

}  // namespace shotkit
