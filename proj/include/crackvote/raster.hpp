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

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crackvote {

/// Thrown when an operation receives a parameter outside its documented domain.
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PixelCoord {
    int x = 0;  // column
    int y = 0;  // row

    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
    friend auto operator<=>(const PixelCoord& a, const PixelCoord& b) {
        // raster order: row first
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
};

/// Pixel displacement.
struct Offset {
    int dx = 0;
    int dy = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

/// Dense row-major raster. Pixel (x, y) lives at index y * width + x.
template <typename T>
class Raster {
public:
    using value_type = T;

    Raster() = default;

    Raster(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        if (width < 1 || height < 1) {
            throw ParamError("raster dimensions must be positive, got " +
                             std::to_string(width) + "x" + std::to_string(height));
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Raster(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (width < 1 || height < 1) {
            throw ParamError("raster dimensions must be positive");
        }
        if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw ParamError("raster data size does not match dimensions");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    bool contains(PixelCoord p) const noexcept { return contains(p.x, p.y); }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<T> row(int y) noexcept {
        return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
    }
    std::span<const T> row(int y) const noexcept {
        return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
    }

    std::span<T> pixels() & noexcept { return data_; }
    std::span<const T> pixels() const& noexcept { return data_; }
    // a span into a temporary would dangle
    std::span<const T> pixels() const&& = delete;

    template <typename U>
    bool same_shape(const Raster<U>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// Intensities normalized to [0, 1].
using GrayImage = Raster<double>;

/// One byte per pixel: 1 = foreground (crack), 0 = background.
using BinaryMask = Raster<std::uint8_t>;

/// Nearest 8-bit level of a normalized intensity.
inline std::uint8_t to_u8(double v) noexcept {
    if (!(v > 0.0)) return 0;
    if (v >= 1.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

inline double from_u8(std::uint8_t v) noexcept { return static_cast<double>(v) / 255.0; }

/// Gray inversion: v -> 1 - v.
inline GrayImage invert(const GrayImage& img) {
    GrayImage out = img;
    for (double& v : out.pixels()) v = 1.0 - v;
    return out;
}

/// Snap every intensity onto the 8-bit grid k/255.
inline GrayImage quantize(const GrayImage& img) {
    GrayImage out = img;
    for (double& v : out.pixels()) v = from_u8(to_u8(v));
    return out;
}

inline std::size_t count_foreground(const BinaryMask& m) {
    std::size_t n = 0;
    for (auto b : m.pixels()) n += b != 0;
    return n;
}

/// Foreground coordinates in raster order.
inline std::vector<PixelCoord> foreground_coords(const BinaryMask& m) {
    std::vector<PixelCoord> pts;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m(x, y)) pts.push_back({x, y});
    return pts;
}

}  // namespace crackvote
