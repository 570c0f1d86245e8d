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

// Binary mask cleanup: small-component removal and endpoint (spur) pruning.

#pragma once

#include <array>
#include <span>
#include <cstdint>
#include <string>
#include <vector>

#include "crackvote/raster.hpp"

namespace crackvote {

/// Connected-component labels, 0 = background, components numbered from 1 in
/// raster order of their first pixel.
inline Raster<int> label_components(const BinaryMask& m, int connectivity, int* count = nullptr) {
    if (connectivity != 4 && connectivity != 8) {
        throw ParamError("connectivity must be 4 or 8, got " + std::to_string(connectivity));
    }
    static constexpr std::array<Offset, 8> kN8{{{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                                 {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};
    static constexpr std::array<Offset, 4> kN4{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
    const std::span<const Offset> nbrs =
        connectivity == 8 ? std::span<const Offset>(kN8) : std::span<const Offset>(kN4);

    Raster<int> labels(m.width(), m.height(), 0);
    std::vector<PixelCoord> stack;
    int next = 0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y) || labels(x, y)) continue;
            ++next;
            labels(x, y) = next;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const PixelCoord p = stack.back();
                stack.pop_back();
                for (const auto& o : nbrs) {
                    const int nx = p.x + o.dx, ny = p.y + o.dy;
                    if (m.contains(nx, ny) && m(nx, ny) && !labels(nx, ny)) {
                        labels(nx, ny) = next;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }
    if (count) *count = next;
    return labels;
}

/// Drops every foreground component with fewer than min_area pixels.
inline BinaryMask remove_small_components(const BinaryMask& m, int min_area, int connectivity = 8) {
    if (min_area < 1) throw ParamError("min_area must be >= 1");
    int n = 0;
    const auto labels = label_components(m, connectivity, &n);
    std::vector<int> area(static_cast<std::size_t>(n) + 1, 0);
    for (int l : labels.pixels()) ++area[static_cast<std::size_t>(l)];
    BinaryMask out(m.width(), m.height(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const int l = labels[i];
        out[i] = (l != 0 && area[static_cast<std::size_t>(l)] >= min_area) ? 1 : 0;
    }
    return out;
}

namespace detail {

// A pixel is a spur tip when its foreground 8-neighbours form one contiguous
// run of length 1..3 around the ring. Length 1 is the classic single-neighbour
// endpoint; lengths 2-3 catch the base of a stub that still touches the trunk
// with a short arc, while pixels on line interiors (two runs) and pixels
// inside thick regions (runs of 4+) are kept.
inline bool is_spur_tip(const BinaryMask& m, int x, int y) {
    static constexpr std::array<Offset, 8> kRing{{{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                                   {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
    std::array<bool, 8> on{};
    int count = 0;
    for (std::size_t i = 0; i < kRing.size(); ++i) {
        const int nx = x + kRing[i].dx, ny = y + kRing[i].dy;
        on[i] = m.contains(nx, ny) && m(nx, ny);
        count += on[i];
    }
    if (count < 1 || count > 3) return false;
    int runs = 0;
    for (std::size_t i = 0; i < 8; ++i) runs += on[i] && !on[(i + 7) % 8];
    return runs == 1;
}

}  // namespace detail

/// Removes spur tips `iterations` times; each pass deletes all current tips at once.
inline BinaryMask binary_spur_prune(const BinaryMask& m, int iterations) {
    if (iterations < 0) throw ParamError("iterations must be >= 0");
    BinaryMask cur = m;
    std::vector<std::size_t> tips;
    for (int it = 0; it < iterations; ++it) {
        tips.clear();
        for (int y = 0; y < cur.height(); ++y)
            for (int x = 0; x < cur.width(); ++x)
                if (cur(x, y) && detail::is_spur_tip(cur, x, y)) tips.push_back(cur.index(x, y));
        if (tips.empty()) break;
        for (auto i : tips) cur[i] = 0;
    }
    return cur;
}

}  // namespace crackvote
