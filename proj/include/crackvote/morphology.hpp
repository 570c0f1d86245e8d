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

// Grayscale morphology with flat, symmetric structuring elements.
//
// Offsets that fall outside the image are skipped, so erosion and dilation
// are the min / max over the in-bounds part of the element. Both supported
// shapes are row-convex: every row of the element is one contiguous span
// [-h, h], which lets each row be handled by a sliding-window extremum.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "crackvote/median.hpp"
#include "crackvote/raster.hpp"

namespace crackvote {

class StructuringElement {
public:
    enum class Shape { square, disk };

    /// side must be odd.
    static StructuringElement square(int side) {
        if (side < 1 || side % 2 == 0) {
            throw ParamError("square element side must be odd and >= 1, got " +
                             std::to_string(side));
        }
        return StructuringElement(Shape::square, side / 2);
    }

    static StructuringElement disk(int radius) {
        if (radius < 0) throw ParamError("disk radius must be >= 0");
        return StructuringElement(Shape::disk, radius);
    }

    Shape shape() const noexcept { return shape_; }
    /// Half-extent along each axis.
    int reach() const noexcept { return reach_; }

    /// Half-width of the span in row dy, -reach <= dy <= reach.
    int span(int dy) const noexcept { return spans_[static_cast<std::size_t>(dy + reach_)]; }

    std::vector<Offset> offsets() const {
        std::vector<Offset> out;
        for (int dy = -reach_; dy <= reach_; ++dy)
            for (int dx = -span(dy); dx <= span(dy); ++dx) out.push_back({dx, dy});
        return out;
    }

private:
    StructuringElement(Shape shape, int reach) : shape_(shape), reach_(reach) {
        for (int dy = -reach; dy <= reach; ++dy) {
            if (shape == Shape::square) {
                spans_.push_back(reach);
            } else {
                int h = 0;
                while ((h + 1) * (h + 1) + dy * dy <= reach * reach) ++h;
                spans_.push_back(h);
            }
        }
    }

    Shape shape_;
    int reach_;
    std::vector<int> spans_;
};

namespace detail {

// out[i] = best of in[max(0,i-h) .. min(n-1,i+h)] using a monotone deque.
template <typename Better>
void sliding_extremum(std::span<const double> in, int h, std::span<double> out,
                      std::vector<int>& dq, Better better) {
    const int n = static_cast<int>(in.size());
    dq.resize(static_cast<std::size_t>(n));
    int head = 0, tail = 0, next = 0;
    for (int i = 0; i < n; ++i) {
        const int last = std::min(n - 1, i + h);
        for (; next <= last; ++next) {
            while (tail > head && !better(in[dq[tail - 1]], in[next])) --tail;
            dq[tail++] = next;
        }
        while (dq[head] < i - h) ++head;
        out[i] = in[dq[head]];
    }
}

template <typename Better>
GrayImage flat_rank_extremum(const GrayImage& f, const StructuringElement& b, Better better) {
    const int w = f.width(), h = f.height(), r = b.reach();
    GrayImage out(w, h);
    std::vector<char> touched(static_cast<std::size_t>(h), 0);

    std::map<int, std::vector<double>> by_span;  // span -> filtered source row
    for (int dy = -r; dy <= r; ++dy) by_span.try_emplace(b.span(dy), std::vector<double>(w));
    std::vector<int> dq;

    for (int sy = 0; sy < h; ++sy) {
        for (auto& [span, buf] : by_span) sliding_extremum(f.row(sy), span, buf, dq, better);
        // source row sy contributes to output rows y with y + dy == sy
        for (int dy = -r; dy <= r; ++dy) {
            const int y = sy - dy;
            if (y < 0 || y >= h) continue;
            const auto& src = by_span.at(b.span(dy));
            auto dst = out.row(y);
            if (!touched[static_cast<std::size_t>(y)]) {
                std::copy(src.begin(), src.end(), dst.begin());
                touched[static_cast<std::size_t>(y)] = 1;
            } else {
                for (int x = 0; x < w; ++x)
                    if (better(src[x], dst[x])) dst[x] = src[x];
            }
        }
    }
    return out;
}

}  // namespace detail

/// Neighborhood minimum over the flat element.
inline GrayImage gray_erode(const GrayImage& f, const StructuringElement& b) {
    return detail::flat_rank_extremum(f, b, std::less<double>{});
}

/// Neighborhood maximum over the flat element (reflection is a no-op: b is symmetric).
inline GrayImage gray_dilate(const GrayImage& f, const StructuringElement& b) {
    return detail::flat_rank_extremum(f, b, std::greater<double>{});
}

inline GrayImage gray_open(const GrayImage& f, const StructuringElement& b) {
    return gray_dilate(gray_erode(f, b), b);
}

inline GrayImage gray_close(const GrayImage& f, const StructuringElement& b) {
    return gray_erode(gray_dilate(f, b), b);
}

/// close(f) - f, clamped to [0, 1]. Bright where f had dark structures
/// narrower than b.
inline GrayImage bottom_hat(const GrayImage& f, const StructuringElement& b) {
    GrayImage out = gray_close(f, b);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i] - f[i], 0.0, 1.0);
    return out;
}

}  // namespace crackvote
