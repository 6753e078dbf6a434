#pragma once

#include <span>
#include <vector>

#include "shotkit/types.hpp"

namespace shotkit {

// Frame-to-frame motion magnitudes: d[0] = 0 and d[i] = L2 distance between
// the full [Q, D] feature blocks of frames i and i-1, accumulated in float64.
std::vector<double> frame_deltas(const VideoFeatures& video);

// Normalized Gaussian taps, length 2*radius + 1 with radius = ceil(3*sigma)
// (at least 1).  Requires sigma > 0.
std::vector<double> gaussian_kernel(double sigma);

// 1-D convolution with symmetric (reflect) boundary handling; the kernel may
// be longer than the signal.  Kernel length must be odd.
std::vector<double> convolve_reflect(std::span<const double> signal,
                                     std::span<const double> kernel);

// Gaussian smoothing of a 1-D series.  sigma == 0 returns the input
// unchanged; sigma < 0 is rejected.
std::vector<double> gaussian_smooth(std::span<const double> signal, double sigma);

// Raw and smoothed motion series for one video.
struct MotionSeries {
    std::vector<double> raw;       // frame_deltas output
    std::vector<double> smoothed;  // gaussian_smooth(raw, sigma)
    double sigma = 0.0;
};

MotionSeries motion_series(const VideoFeatures& video, double sigma);

}  // namespace shotkit
