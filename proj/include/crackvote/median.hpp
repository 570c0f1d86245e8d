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
#include <string>
#include <string_view>
#include <vector>

#include "crackvote/raster.hpp"

namespace crackvote {

/// Median-filter window. `size` is the side length for square and cross
/// (odd), the radius for disk.
struct Neighborhood {
    enum class Shape { square, cross, disk };

    Shape shape = Shape::square;
    int size = 3;

    static Neighborhood square(int side) { return {Shape::square, side}; }
    static Neighborhood cross(int side) { return {Shape::cross, side}; }
    static Neighborhood disk(int radius) { return {Shape::disk, radius}; }

    std::vector<Offset> offsets() const {
        std::vector<Offset> out;
        if (shape == Shape::disk) {
            if (size < 0) throw ParamError("disk radius must be >= 0");
            for (int dy = -size; dy <= size; ++dy)
                for (int dx = -size; dx <= size; ++dx)
                    if (dx * dx + dy * dy <= size * size) out.push_back({dx, dy});
            return out;
        }
        if (size < 1 || size % 2 == 0) {
            throw ParamError("neighborhood side must be odd and >= 1, got " + std::to_string(size));
        }
        const int h = size / 2;
        for (int dy = -h; dy <= h; ++dy)
            for (int dx = -h; dx <= h; ++dx)
                if (shape == Shape::square || dx == 0 || dy == 0) out.push_back({dx, dy});
        return out;
    }

    friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

inline std::string_view to_string(Neighborhood::Shape s) noexcept {
    switch (s) {
        case Neighborhood::Shape::square: return "square";
        case Neighborhood::Shape::cross: return "cross";
        case Neighborhood::Shape::disk: return "disk";
    }
    return "square";
}

/// Median over the in-bounds part of the neighborhood. With an even number of
/// in-bounds samples the lower-middle value is taken.
inline GrayImage median_filter(const GrayImage& img,
                               const Neighborhood& nb = Neighborhood::square(3)) {
    const auto offs = nb.offsets();
    GrayImage out(img.width(), img.height());
    std::vector<double> window;
    window.reserve(offs.size());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            window.clear();
            for (const auto& o : offs) {
                const int sx = x + o.dx, sy = y + o.dy;
                if (img.contains(sx, sy)) window.push_back(img(sx, sy));
            }
            auto mid = window.begin() + static_cast<std::ptrdiff_t>((window.size() - 1) / 2);
            std::nth_element(window.begin(), mid, window.end());
            out(x, y) = *mid;
        }
    }
    return out;
}

}  // namespace crackvote
