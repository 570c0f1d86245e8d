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

// Synthetic road-surface scenes with exact crack ground truth.
//
// The scene is a reflectance map (background, lane stripes, cracks, specks)
// multiplied by a horizontal illumination ramp, plus uniform noise, snapped
// to 8 bits. A pixel belongs to a crack or stripe when its centre lies within
// half the band width of the polyline / segment.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "crackvote/evaluation.hpp"
#include "crackvote/raster.hpp"

namespace crackvote {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point2&, const Point2&) = default;
};

struct CrackSpec {
    std::vector<Point2> points;
    double width = 6.0;
    double intensity = 0.25;
};

struct StripeSpec {
    Point2 from;
    Point2 to;
    double width = 40.0;
    double intensity = 1.0;
};

struct SyntheticSceneSpec {
    int width = 256;
    int height = 256;
    std::uint64_t seed = 1;
    double background = 0.7;
    double noise = 0.0;  // uniform noise half-amplitude
    double illumination_left = 1.0;
    double illumination_right = 1.0;
    std::vector<CrackSpec> cracks;
    std::vector<StripeSpec> stripes;
    int speck_count = 0;
    double speck_intensity = 0.25;
    int speck_min_radius = 0;
    int speck_max_radius = 0;
    double speck_clearance = 8.0;  // min distance from any crack pixel

    /// Returns warnings; throws ParamError on invalid fields.
    std::vector<std::string> validate(int bottom_hat_radius = 15) const {
        auto unit = [](double v, const std::string& name) {
            if (!(v >= 0.0 && v <= 1.0)) throw ParamError(name + " must be in [0,1]");
        };
        if (width < 1 || height < 1) throw ParamError("scene dimensions must be positive");
        unit(background, "background");
        if (!(noise >= 0.0 && noise <= 1.0)) throw ParamError("noise must be in [0,1]");
        if (!(illumination_left >= 0.0) || !(illumination_right >= 0.0)) {
            throw ParamError("illumination must be non-negative");
        }
        std::vector<std::string> warnings;
        for (std::size_t i = 0; i < cracks.size(); ++i) {
            const auto& c = cracks[i];
            if (c.points.size() < 2) throw ParamError("crack needs at least two points");
            if (!(c.width > 0.0)) throw ParamError("crack width must be positive");
            unit(c.intensity, "crack intensity");
            if (c.width >= 2.0 * bottom_hat_radius) {
                warnings.push_back("crack " + std::to_string(i) + " width " +
                                   std::to_string(c.width) +
                                   " is not narrower than the bottom-hat element");
            }
        }
        for (const auto& s : stripes) {
            if (!(s.width > 0.0)) throw ParamError("stripe width must be positive");
            unit(s.intensity, "stripe intensity");
        }
        if (speck_count < 0) throw ParamError("speck count must be >= 0");
        unit(speck_intensity, "speck intensity");
        if (speck_min_radius < 0 || speck_max_radius < speck_min_radius) {
            throw ParamError("speck radii must satisfy 0 <= min <= max");
        }
        if (!(speck_clearance >= 0.0)) throw ParamError("speck clearance must be >= 0");
        return warnings;
    }
};

struct SyntheticScene {
    GrayImage image;
    BinaryMask cracks;  // ground truth
    BinaryMask specks;
    std::vector<std::string> warnings;
};

namespace detail {

inline double segment_distance(Point2 p, Point2 a, Point2 b) noexcept {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

inline void paint_band(BinaryMask& m, const std::vector<Point2>& poly, double width) {
    const double half = width / 2.0;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        const Point2 a = poly[i], b = poly[i + 1];
        const int x0 = std::max(0, int(std::floor(std::min(a.x, b.x) - half)));
        const int x1 = std::min(m.width() - 1, int(std::ceil(std::max(a.x, b.x) + half)));
        const int y0 = std::max(0, int(std::floor(std::min(a.y, b.y) - half)));
        const int y1 = std::min(m.height() - 1, int(std::ceil(std::max(a.y, b.y) + half)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (segment_distance({double(x), double(y)}, a, b) <= half) m(x, y) = 1;
    }
}

// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

inline SyntheticScene render_scene(const SyntheticSceneSpec& spec, int bottom_hat_radius = 15) {
    SyntheticScene scene;
    scene.warnings = spec.validate(bottom_hat_radius);
    const int w = spec.width, h = spec.height;
    GrayImage reflect(w, h, spec.background);
    scene.cracks = BinaryMask(w, h, 0);
    scene.specks = BinaryMask(w, h, 0);

    for (const auto& s : spec.stripes) {
        BinaryMask band(w, h, 0);
        detail::paint_band(band, {s.from, s.to}, s.width);
        for (std::size_t i = 0; i < band.size(); ++i)
            if (band[i]) reflect[i] = s.intensity;
    }
    for (const auto& c : spec.cracks) {
        BinaryMask band(w, h, 0);
        detail::paint_band(band, c.points, c.width);
        for (std::size_t i = 0; i < band.size(); ++i)
            if (band[i]) {
                reflect[i] = c.intensity;
                scene.cracks[i] = 1;
            }
    }

    std::mt19937_64 rng(spec.seed);
    if (spec.speck_count > 0) {
        const bool any_crack = count_foreground(scene.cracks) > 0;
        const auto clearance = any_crack ? squared_distance_transform(scene.cracks)
                                         : Raster<std::int64_t>(w, h, std::int64_t{1} << 40);
        const double min_d2 = spec.speck_clearance * spec.speck_clearance;
        const int span = spec.speck_max_radius - spec.speck_min_radius + 1;
        int placed = 0;
        for (int attempt = 0; placed < spec.speck_count && attempt < 200 * spec.speck_count; ++attempt) {
            const int cx = static_cast<int>(detail::unit_uniform(rng) * w);
            const int cy = static_cast<int>(detail::unit_uniform(rng) * h);
            const int r = spec.speck_min_radius + static_cast<int>(detail::unit_uniform(rng) * span);
            bool ok = true;
            for (int dy = -r; dy <= r && ok; ++dy)
                for (int dx = -r; dx <= r && ok; ++dx) {
                    if (dx * dx + dy * dy > r * r) continue;
                    const int x = cx + dx, y = cy + dy;
                    ok = reflect.contains(x, y) && double(clearance(x, y)) >= min_d2 &&
                         !scene.specks(x, y);
                }
            if (!ok) continue;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx)
                    if (dx * dx + dy * dy <= r * r) {
                        reflect(cx + dx, cy + dy) = spec.speck_intensity;
                        scene.specks(cx + dx, cy + dy) = 1;
                    }
            ++placed;
        }
        if (placed < spec.speck_count) {
            scene.warnings.push_back("placed only " + std::to_string(placed) + " of " +
                                     std::to_string(spec.speck_count) + " specks");
        }
    }

    scene.image = GrayImage(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double ramp = w > 1 ? double(x) / double(w - 1) : 0.0;
            const double light =
                spec.illumination_left + (spec.illumination_right - spec.illumination_left) * ramp;
            double v = reflect(x, y) * light;
            if (spec.noise > 0.0) v += spec.noise * (2.0 * detail::unit_uniform(rng) - 1.0);
            scene.image(x, y) = from_u8(to_u8(std::clamp(v, 0.0, 1.0)));
        }
    }
    return scene;
}

// JSON scene description ------------------------------------------------------

inline SyntheticSceneSpec scene_spec_from_json(const nlohmann::json& j) {
    static const std::array<const char*, 11> kKeys = {
        "width", "height", "seed", "background", "noise", "illumination",
        "cracks", "stripes", "specks", "comment", "bottomhat_radius"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(kKeys.begin(), kKeys.end(), [&](const char* k) { return it.key() == k; }) ==
            kKeys.end()) {
            throw ParamError("unknown scene field '" + it.key() + "'");
        }
    }
    auto pt = [](const nlohmann::json& p) {
        if (!p.is_array() || p.size() != 2) throw ParamError("points must be [x, y] pairs");
        return Point2{p[0].get<double>(), p[1].get<double>()};
    };
    SyntheticSceneSpec s;
    try {
        s.width = j.value("width", s.width);
        s.height = j.value("height", s.height);
        s.seed = j.value("seed", s.seed);
        s.background = j.value("background", s.background);
        s.noise = j.value("noise", s.noise);
        if (j.contains("illumination")) {
            const auto& il = j.at("illumination");
            if (!il.is_array() || il.size() != 2) throw ParamError("illumination must be [left, right]");
            s.illumination_left = il[0].get<double>();
            s.illumination_right = il[1].get<double>();
        }
        for (const auto& c : j.value("cracks", nlohmann::json::array())) {
            CrackSpec cs;
            for (const auto& p : c.at("points")) cs.points.push_back(pt(p));
            cs.width = c.value("width", cs.width);
            cs.intensity = c.value("intensity", cs.intensity);
            s.cracks.push_back(std::move(cs));
        }
        for (const auto& st : j.value("stripes", nlohmann::json::array())) {
            StripeSpec ss;
            ss.from = pt(st.at("from"));
            ss.to = pt(st.at("to"));
            ss.width = st.value("width", ss.width);
            ss.intensity = st.value("intensity", ss.intensity);
            s.stripes.push_back(ss);
        }
        if (j.contains("specks")) {
            const auto& sp = j.at("specks");
            s.speck_count = sp.value("count", s.speck_count);
            s.speck_intensity = sp.value("intensity", s.speck_intensity);
            s.speck_min_radius = sp.value("min_radius", s.speck_min_radius);
            s.speck_max_radius = sp.value("max_radius", s.speck_max_radius);
            s.speck_clearance = sp.value("clearance", s.speck_clearance);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParamError(std::string("invalid scene description: ") + e.what());
    }
    return s;
}

inline SyntheticSceneSpec load_scene_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParamError(path.string() + ": cannot open scene description");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParamError(path.string() + ": " + e.what());
    }
    return scene_spec_from_json(j);
}

}  // namespace crackvote
