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

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "crackvote/raster.hpp"

namespace crackvote {

/// Summed-area table over the 8-bit levels of a GrayImage.
///
/// Storage carries one leading row and column of zeros, so `padded(x, y)`
/// is the sum of all levels with column < x and row < y. Sums are exact
/// integers: 65535^2 * 255 fits comfortably in 64 bits.
class IntegralImage {
public:
    using sum_type = std::uint64_t;

    IntegralImage() = default;

    explicit IntegralImage(const GrayImage& img)
        : width_(img.width()), height_(img.height()),
          table_(static_cast<std::size_t>(width_ + 1) * static_cast<std::size_t>(height_ + 1), 0) {
        for (int y = 0; y < height_; ++y) {
            sum_type row_sum = 0;
            for (int x = 0; x < width_; ++x) {
                row_sum += to_u8(img(x, y));
                table_[slot(x + 1, y + 1)] = table_[slot(x + 1, y)] + row_sum;
            }
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    /// Padded lookup, 0 <= x <= width, 0 <= y <= height.
    sum_type padded(int x, int y) const noexcept { return table_[slot(x, y)]; }

    /// Inclusive prefix sum over columns 0..x and rows 0..y.
    sum_type sum_through(int x, int y) const noexcept { return padded(x + 1, y + 1); }

private:
    std::size_t slot(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_ + 1) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<sum_type> table_;
};

inline IntegralImage build_integral(const GrayImage& img) { return IntegralImage(img); }

/// Sum of levels in the half-open rectangle [x0, x1) x [y0, y1): four lookups.
template <typename Table>
auto rect_sum(const Table& ii, int x0, int y0, int x1, int y1) {
    return ii.padded(x1, y1) + ii.padded(x0, y0) - ii.padded(x0, y1) - ii.padded(x1, y0);
}

/// Normalized mean of the w x w window centred on `c`, clipped to the image.
/// The divisor is the number of in-bounds pixels.
template <typename Table>
double window_mean(const Table& ii, PixelCoord c, int w) {
    if (w < 3 || w % 2 == 0) {
        throw ParamError("window size must be odd and >= 3, got " + std::to_string(w));
    }
    if (c.x < 0 || c.y < 0 || c.x >= ii.width() || c.y >= ii.height()) {
        throw std::out_of_range("window centre (" + std::to_string(c.x) + "," +
                                std::to_string(c.y) + ") outside image");
    }
    const int half = w / 2;
    const int x0 = std::max(c.x - half, 0);
    const int y0 = std::max(c.y - half, 0);
    const int x1 = std::min(c.x + half + 1, ii.width());
    const int y1 = std::min(c.y + half + 1, ii.height());
    const auto sum = rect_sum(ii, x0, y0, x1, y1);
    const double count = static_cast<double>(x1 - x0) * static_cast<double>(y1 - y0);
    return static_cast<double>(sum) / (count * 255.0);
}

}  // namespace crackvote
