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

// Detection scoring: directed / symmetric Hausdorff distance and the
// buffered-match SM score.
//
// SM (buffered-match definition): the percentage of pixels, counted over both
// sets, that have a counterpart in the other set within the search radius tau:
//
//   SM = 100 * (|{a in A : d(a, B) <= tau}| + |{b in B : d(b, A) <= tau}|) / (|A| + |B|)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "crackvote/raster.hpp"

namespace crackvote {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Deduplicated point set, kept in raster order.
class PixelSet {
public:
    PixelSet() = default;

    explicit PixelSet(std::vector<PixelCoord> pts) : pts_(std::move(pts)) {
        std::sort(pts_.begin(), pts_.end());
        pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    }

    static PixelSet from_mask(const BinaryMask& m) { return PixelSet(foreground_coords(m)); }

    std::size_t size() const noexcept { return pts_.size(); }
    bool empty() const noexcept { return pts_.empty(); }
    const std::vector<PixelCoord>& points() const noexcept { return pts_; }

private:
    std::vector<PixelCoord> pts_;
};

/// Exact squared Euclidean distance transform (Meijster et al.): each cell
/// receives the squared distance to the nearest set cell. Integer arithmetic
/// throughout. Cells are "infinitely" far when the raster holds no set cell.
inline Raster<std::int64_t> squared_distance_transform(const BinaryMask& features) {
    const int w = features.width(), h = features.height();
    const std::int64_t inf = static_cast<std::int64_t>(w) + h + 1;
    Raster<std::int64_t> g(w, h, 0);

    // columns: distance to nearest feature in the same column
    for (int x = 0; x < w; ++x) {
        g(x, 0) = features(x, 0) ? 0 : inf;
        for (int y = 1; y < h; ++y) g(x, y) = features(x, y) ? 0 : std::min(inf, g(x, y - 1) + 1);
        for (int y = h - 2; y >= 0; --y)
            if (g(x, y + 1) < g(x, y)) g(x, y) = g(x, y + 1) + 1;
    }

    // rows: lower envelope of parabolas (x - i)^2 + g(i)^2
    Raster<std::int64_t> dt(w, h, 0);
    std::vector<int> s(static_cast<std::size_t>(w)), t(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        auto gy = [&](int i) { return g(i, y); };
        auto f = [&](std::int64_t x, int i) { return (x - i) * (x - i) + gy(i) * gy(i); };
        auto sep = [&](std::int64_t i, std::int64_t u) {
            // floor division: the numerator may be negative
            const std::int64_t num = u * u - i * i + gy(int(u)) * gy(int(u)) - gy(int(i)) * gy(int(i));
            const std::int64_t den = 2 * (u - i);
            return num >= 0 ? num / den : -((-num + den - 1) / den);
        };
        int q = 0;
        s[0] = 0;
        t[0] = 0;
        for (int u = 1; u < w; ++u) {
            while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) --q;
            if (q < 0) {
                q = 0;
                s[0] = u;
            } else {
                const std::int64_t wpos = 1 + sep(s[q], u);
                if (wpos < w) {
                    ++q;
                    s[q] = u;
                    t[q] = static_cast<int>(wpos);
                }
            }
        }
        for (int u = w - 1; u >= 0; --u) {
            dt(u, y) = f(u, s[q]);
            if (u == t[q]) --q;
        }
    }
    return dt;
}

namespace detail {

struct Frame {
    int x0 = 0, y0 = 0, w = 1, h = 1;
};

inline Frame bounding_frame(const PixelSet& a, const PixelSet& b) {
    int x0 = std::numeric_limits<int>::max(), y0 = x0;
    int x1 = std::numeric_limits<int>::min(), y1 = x1;
    for (const auto* set : {&a, &b})
        for (const auto& p : set->points()) {
            x0 = std::min(x0, p.x);
            y0 = std::min(y0, p.y);
            x1 = std::max(x1, p.x);
            y1 = std::max(y1, p.y);
        }
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

// Squared distance from every point of `from` to the nearest point of `to`.
inline std::vector<std::int64_t> nearest_squared(const PixelSet& from, const PixelSet& to) {
    const Frame fr = bounding_frame(from, to);
    BinaryMask feat(fr.w, fr.h, 0);
    for (const auto& p : to.points()) feat(p.x - fr.x0, p.y - fr.y0) = 1;
    const auto dt = squared_distance_transform(feat);
    std::vector<std::int64_t> out;
    out.reserve(from.size());
    for (const auto& p : from.points()) out.push_back(dt(p.x - fr.x0, p.y - fr.y0));
    return out;
}

}  // namespace detail

/// max over a of min over b of |a - b|. NaN when either set is empty.
inline double directed_hausdorff(const PixelSet& a, const PixelSet& b) {
    if (a.empty() || b.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::int64_t worst = 0;
    for (auto d2 : detail::nearest_squared(a, b)) worst = std::max(worst, d2);
    return std::sqrt(static_cast<double>(worst));
}

inline double hausdorff(const PixelSet& a, const PixelSet& b) {
    if (a.empty() || b.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

/// Buffered-match SM score in [0, 100]; see the file comment.
inline double sm_score(const PixelSet& detected, const PixelSet& reference, double tau) {
    if (detected.empty() || reference.empty()) {
        throw EvalError("sm_score needs two nonempty pixel sets");
    }
    if (!(tau >= 0.0)) throw ParamError("search radius tau must be >= 0");
    const double tau2 = tau * tau;
    std::size_t matched = 0;
    for (auto d2 : detail::nearest_squared(detected, reference)) matched += double(d2) <= tau2;
    for (auto d2 : detail::nearest_squared(reference, detected)) matched += double(d2) <= tau2;
    return 100.0 * static_cast<double>(matched) /
           static_cast<double>(detected.size() + reference.size());
}

struct EvalReport {
    double h_ab = 0.0;  // detected -> reference
    double h_ba = 0.0;  // reference -> detected
    double H = 0.0;
    double SM = 0.0;
    std::size_t size_a = 0;
    std::size_t size_b = 0;
    double tau = 0.0;  // pixels
};

/// `pixel_size` scales the reported distances only; tau stays in pixels.
inline EvalReport evaluate(const BinaryMask& detected, const BinaryMask& reference, double tau,
                           double pixel_size = 1.0) {
    if (!detected.same_shape(reference)) {
        throw EvalError("mask dimensions differ: " + std::to_string(detected.width()) + "x" +
                        std::to_string(detected.height()) + " vs " +
                        std::to_string(reference.width()) + "x" +
                        std::to_string(reference.height()));
    }
    if (!(pixel_size > 0.0)) throw ParamError("pixel_size must be positive");
    const PixelSet a = PixelSet::from_mask(detected);
    const PixelSet b = PixelSet::from_mask(reference);
    if (a.empty()) throw EvalError("detected mask is empty");
    if (b.empty()) throw EvalError("reference mask is empty");
    EvalReport r;
    r.h_ab = directed_hausdorff(a, b) * pixel_size;
    r.h_ba = directed_hausdorff(b, a) * pixel_size;
    r.H = std::max(r.h_ab, r.h_ba);
    r.SM = sm_score(a, b, tau);
    r.size_a = a.size();
    r.size_b = b.size();
    r.tau = tau;
    return r;
}

}  // namespace crackvote
