// Shared test helpers: random fixtures and brute-force reference
// implementations. The oracles deliberately avoid the library's fast paths
// (no integral image, no span decomposition, no distance transform).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "crackvote/crackvote.hpp"

namespace cvtest {

using crackvote::BinaryMask;
using crackvote::GrayImage;
using crackvote::PixelCoord;

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random image on the 8-bit grid.
inline GrayImage random_image(std::mt19937_64& rng, int w, int h) {
    GrayImage img(w, h);
    for (auto& v : img.pixels()) v = crackvote::from_u8(static_cast<std::uint8_t>(uniform_int(rng, 0, 255)));
    return img;
}

/// Random image with few distinct levels (provokes ties).
inline GrayImage random_coarse_image(std::mt19937_64& rng, int w, int h, int levels) {
    GrayImage img(w, h);
    for (auto& v : img.pixels()) v = double(uniform_int(rng, 0, levels - 1) * (255 / (levels - 1))) / 255.0;
    return img;
}

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
    BinaryMask m(w, h, 0);
    std::bernoulli_distribution on(density);
    for (auto& v : m.pixels()) v = on(rng) ? 1 : 0;
    return m;
}

inline std::vector<PixelCoord> random_points(std::mt19937_64& rng, int n, int extent) {
    std::vector<PixelCoord> pts;
    for (int i = 0; i < n; ++i) pts.push_back({uniform_int(rng, 0, extent - 1), uniform_int(rng, 0, extent - 1)});
    return pts;
}

// Oracles ---------------------------------------------------------------------

/// Sum of 8-bit levels over the inclusive rectangle, by direct loop.
inline std::uint64_t brute_rect_sum(const GrayImage& img, int x0, int y0, int x1, int y1) {
    std::uint64_t s = 0;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) s += crackvote::to_u8(img(x, y));
    return s;
}

/// Mean over the clipped w x w window, in [0, 1].
inline double brute_window_mean(const GrayImage& img, int cx, int cy, int w) {
    std::uint64_t s = 0, n = 0;
    for (int y = cy - w / 2; y <= cy + w / 2; ++y)
        for (int x = cx - w / 2; x <= cx + w / 2; ++x)
            if (img.contains(x, y)) {
                s += crackvote::to_u8(img(x, y));
                ++n;
            }
    return static_cast<double>(s) / (static_cast<double>(n) * 255.0);
}

enum class Window { square, cross, disk };

inline bool in_window(Window kind, int size, int dx, int dy) {
    switch (kind) {
        case Window::square: return std::abs(dx) <= size / 2 && std::abs(dy) <= size / 2;
        case Window::cross:
            return (dx == 0 && std::abs(dy) <= size / 2) || (dy == 0 && std::abs(dx) <= size / 2);
        case Window::disk: return dx * dx + dy * dy <= size * size;
    }
    return false;
}

inline GrayImage brute_median(const GrayImage& img, Window kind, int size) {
    GrayImage out(img.width(), img.height());
    const int reach = kind == Window::disk ? size : size / 2;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            std::vector<double> vals;
            for (int dy = -reach; dy <= reach; ++dy)
                for (int dx = -reach; dx <= reach; ++dx)
                    if (in_window(kind, size, dx, dy) && img.contains(x + dx, y + dy))
                        vals.push_back(img(x + dx, y + dy));
            std::sort(vals.begin(), vals.end());
            out(x, y) = vals[(vals.size() - 1) / 2];
        }
    return out;
}

/// Min (erode) or max (dilate) over in-bounds element pixels.
/// `kind` is square (size = side) or disk (size = radius).
inline GrayImage brute_rank(const GrayImage& img, Window kind, int size, bool dilate) {
    GrayImage out(img.width(), img.height());
    const int reach = kind == Window::disk ? size : size / 2;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            double best = dilate ? -1.0 : 2.0;
            for (int dy = -reach; dy <= reach; ++dy)
                for (int dx = -reach; dx <= reach; ++dx)
                    if (in_window(kind, size, dx, dy) && img.contains(x + dx, y + dy)) {
                        const double v = img(x + dx, y + dy);
                        best = dilate ? std::max(best, v) : std::min(best, v);
                    }
            out(x, y) = best;
        }
    return out;
}

/// Local threshold by direct window averaging.
inline BinaryMask brute_singh(const GrayImage& img, double k, int w, bool dark) {
    BinaryMask out(img.width(), img.height(), 0);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const double m = brute_window_mean(img, x, y, w);
            const double i = img(x, y);
            const double d = i - m;
            if (std::abs(1.0 - d) < 1e-9) {
                out(x, y) = dark ? 0 : 1;
                continue;
            }
            const double t = m * (1.0 + k * (d / (1.0 - d) - 1.0));
            out(x, y) = dark ? (i < t) : (i > t);
        }
    return out;
}

/// Textbook Otsu: maximize w0 * w1 * (mu0 - mu1)^2 over t; lowest t on ties.
/// Returns the level; an image with one level returns that level.
inline int brute_otsu_level(const GrayImage& img) {
    std::vector<int> levels;
    for (double v : img.pixels()) levels.push_back(crackvote::to_u8(v));
    const double n = static_cast<double>(levels.size());
    int best_t = *std::min_element(levels.begin(), levels.end());
    long double best = 0.0L;
    for (int t = 0; t < 255; ++t) {
        long double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
        for (int l : levels) {
            if (l <= t) {
                n0 += 1;
                s0 += l;
            } else {
                n1 += 1;
                s1 += l;
            }
        }
        if (n0 == 0 || n1 == 0) continue;
        const long double w0 = n0 / n, w1 = n1 / n;
        const long double diff = s0 / n0 - s1 / n1;
        const long double v = w0 * w1 * diff * diff;
        if (v > best * (1.0L + 1e-12L)) {
            best = v;
            best_t = t;
        }
    }
    return best_t;
}

inline double brute_directed_hausdorff(const std::vector<PixelCoord>& a, const std::vector<PixelCoord>& b) {
    if (a.empty() || b.empty()) return std::numeric_limits<double>::quiet_NaN();
    double worst = 0.0;
    for (const auto& p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : b) best = std::min(best, std::hypot(double(p.x - q.x), double(p.y - q.y)));
        worst = std::max(worst, best);
    }
    return worst;
}

inline double brute_sm(const std::vector<PixelCoord>& a_in, const std::vector<PixelCoord>& b_in, double tau) {
    auto dedup = [](std::vector<PixelCoord> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const auto a = dedup(a_in), b = dedup(b_in);
    auto matched = [&](const std::vector<PixelCoord>& from, const std::vector<PixelCoord>& to) {
        std::size_t n = 0;
        for (const auto& p : from) {
            bool hit = false;
            for (const auto& q : to) {
                const double dx = p.x - q.x, dy = p.y - q.y;
                if (dx * dx + dy * dy <= tau * tau) {
                    hit = true;
                    break;
                }
            }
            n += hit;
        }
        return n;
    };
    return 100.0 * double(matched(a, b) + matched(b, a)) / double(a.size() + b.size());
}

/// Squared distance to the nearest set pixel, by exhaustive search.
inline std::int64_t brute_nearest_sq(const BinaryMask& m, int x, int y) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (int j = 0; j < m.height(); ++j)
        for (int i = 0; i < m.width(); ++i)
            if (m(i, j)) best = std::min<std::int64_t>(best, std::int64_t(i - x) * (i - x) + std::int64_t(j - y) * (j - y));
    return best;
}

}  // namespace cvtest
