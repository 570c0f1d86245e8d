// Copyright 2026 The crackvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Binarization: local-mean / mean-deviation adaptive threshold (Singh et al.)
// and Otsu's global threshold as the baseline.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "crackvote/integral.hpp"
#include "crackvote/raster.hpp"

namespace crackvote {

/// Which side of the threshold is foreground. Ties are always background.
///   bright: foreground iff I > T
///   dark:   foreground iff I < T (objects darker than their surroundings)
enum class Polarity { bright, dark };

inline std::string_view to_string(Polarity p) noexcept {
    return p == Polarity::bright ? "bright" : "dark";
}

struct SinghParams {
    double k = 0.06;  // bias, [0, 1]
    int w = 51;       // odd window side, >= 3
    Polarity polarity = Polarity::bright;

    void validate() const {
        if (!(k >= 0.0 && k <= 1.0)) {
            throw ParamError("singh k must be in [0,1], got " + std::to_string(k));
        }
        if (w < 3 || w % 2 == 0) {
            throw ParamError("singh w must be odd and >= 3, got " + std::to_string(w));
        }
    }

    friend bool operator==(const SinghParams&, const SinghParams&) = default;
};

/// Deviations this close to 1 make d / (1 - d) blow up.
inline constexpr double kSinghSingularity = 1e-9;

/// T = m * (1 + k * (d / (1 - d) - 1)), d = I - m. NaN flags the d == 1 case.
inline double singh_level(double intensity, double mean, double k) noexcept {
    const double dev = intensity - mean;
    if (std::abs(1.0 - dev) < kSinghSingularity) return std::nan("");
    return mean * (1.0 + k * (dev / (1.0 - dev) - 1.0));
}

/// Per-pixel decision given the pixel, its window mean and the bias.
inline bool singh_decide(double intensity, double mean, double k, Polarity polarity) noexcept {
    const double t = singh_level(intensity, mean, k);
    if (std::isnan(t)) {
        // maximal positive deviation: brightest possible relative to the window
        return polarity == Polarity::bright;
    }
    return polarity == Polarity::bright ? intensity > t : intensity < t;
}

/// Local adaptive threshold, means from an integral image (four lookups per pixel).
/// Intensities are taken on the 8-bit grid so the integral path is exact.
inline BinaryMask singh_threshold(const GrayImage& img, const SinghParams& p = {}) {
    p.validate();
    const IntegralImage ii(img);
    BinaryMask out(img.width(), img.height(), 0);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double mean = window_mean(ii, {x, y}, p.w);
            const double v = from_u8(to_u8(img(x, y)));
            out(x, y) = singh_decide(v, mean, p.k, p.polarity) ? 1 : 0;
        }
    }
    return out;
}

using Histogram256 = std::array<std::uint64_t, 256>;

inline Histogram256 histogram256(const GrayImage& img) {
    Histogram256 h{};
    for (double v : img.pixels()) ++h[to_u8(v)];
    return h;
}

/// Between-class variance (times N^2) for the split {<= t} / {> t} given the
/// lower class count/level-sum and the totals. Zero when a class is empty.
inline double otsu_between_class(std::uint64_t n0, std::uint64_t s0, std::uint64_t n,
                                 std::uint64_t s) noexcept {
    const std::uint64_t n1 = n - n0;
    if (n0 == 0 || n1 == 0) return 0.0;
    // Exact in 64 bits for images up to 2^28 pixels.
    const std::uint64_t p = n1 * s0, q = n0 * (s - s0);
    const double d = p >= q ? static_cast<double>(p - q) : static_cast<double>(q - p);
    return d * d / (static_cast<double>(n0) * static_cast<double>(n1));
}

/// 8-bit Otsu level. Pixels with level > t form the upper class. Ties resolve to
/// the lowest t; an image with a single level returns that level.
inline int otsu_level(const Histogram256& h) {
    std::uint64_t n = 0, s = 0;
    int lowest = -1;
    for (int t = 0; t < 256; ++t) {
        n += h[t];
        s += h[t] * static_cast<std::uint64_t>(t);
        if (lowest < 0 && h[t]) lowest = t;
    }
    if (n == 0) return 0;
    int best_t = lowest;
    double best = 0.0;
    std::uint64_t n0 = 0, s0 = 0;
    for (int t = 0; t < 255; ++t) {
        n0 += h[t];
        s0 += h[t] * static_cast<std::uint64_t>(t);
        const double v = otsu_between_class(n0, s0, n, s);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    return best_t;
}

/// Global threshold; foreground = levels strictly above the Otsu level.
inline BinaryMask otsu_threshold(const GrayImage& img) {
    const int t = otsu_level(histogram256(img));
    BinaryMask out(img.width(), img.height(), 0);
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = to_u8(img[i]) > t ? 1 : 0;
    return out;
}

}  // namespace crackvote
