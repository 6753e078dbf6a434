#include "shotkit/motion.hpp"

#include <cmath>

namespace shotkit {

std::vector<double> frame_deltas(const VideoFeatures& video) {
    require_valid_video(video);
    const std::int64_t n = video.n_frames();
    const std::int64_t block = video.n_positions() * video.feat_dim();
    std::vector<double> deltas(static_cast<std::size_t>(n), 0.0);
    const float* base = video.frame_features.data.data();
    for (std::int64_t i = 1; i < n; ++i) {
        const float* prev = base + (i - 1) * block;
        const float* cur = base + i * block;
        double sum_sq = 0.0;
        for (std::int64_t j = 0; j < block; ++j) {
            const double diff = static_cast<double>(cur[j]) - static_cast<double>(prev[j]);
            sum_sq += diff * diff;
        }
        deltas[static_cast<std::size_t>(i)] = std::sqrt(sum_sq);
    }
    return deltas;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::OutOfRange, "gaussian_kernel requires sigma > 0");
    }
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int j = -radius; j <= radius; ++j) {
        const double w = std::exp(-(static_cast<double>(j) * j) / (2.0 * sigma * sigma));
        taps[static_cast<std::size_t>(j + radius)] = w;
        sum += w;
    }
    for (double& w : taps) w /= sum;
    return taps;
}

namespace {

// Symmetric reflection (edge value repeated): ...2 1 0 | 0 1 2... Handles
// offsets that bounce multiple times when the kernel is longer than the
// signal.
std::int64_t mirror_index(std::int64_t i, std::int64_t n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

}  // namespace

std::vector<double> convolve_reflect(std::span<const double> signal,
                                     std::span<const double> kernel) {
    if (kernel.empty() || kernel.size() % 2 == 0) {
        throw Error(ErrorCode::OutOfRange, "kernel length must be odd and non-zero");
    }
    const std::int64_t n = static_cast<std::int64_t>(signal.size());
    if (n == 0) return {};
    const std::int64_t radius = static_cast<std::int64_t>(kernel.size() / 2);
    std::vector<double> out(signal.size());
    for (std::int64_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::int64_t j = -radius; j <= radius; ++j) {
            acc += kernel[static_cast<std::size_t>(j + radius)] *
                   signal[static_cast<std::size_t>(mirror_index(i + j, n))];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

std::vector<double> gaussian_smooth(std::span<const double> signal, double sigma) {
    if (sigma < 0.0 || !std::isfinite(sigma)) {
        throw Error(ErrorCode::OutOfRange, "gaussian_smooth requires sigma >= 0");
    }
    if (sigma == 0.0) return std::vector<double>(signal.begin(), signal.end());
    return convolve_reflect(signal, gaussian_kernel(sigma));
}

MotionSeries motion_series(const VideoFeatures& video, double sigma) {
    MotionSeries series;
    series.raw = frame_deltas(video);
    series.smoothed = gaussian_smooth(series.raw, sigma);
    series.sigma = sigma;
    return series;
}

}  // namespace shotkit
