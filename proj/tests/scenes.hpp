// Seeded synthetic scenes used by the acceptance suite and the CLI tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "crackvote/synth.hpp"

namespace cvtest {

/// Meandering crack across the frame, one lane stripe, 200 dark specks.
inline crackvote::SyntheticSceneSpec efficacy_scene(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 7919 + 17);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    crackvote::SyntheticSceneSpec s;
    s.width = 256;
    s.height = 256;
    s.seed = seed;
    s.background = 0.7;
    s.noise = 0.04;

    crackvote::CrackSpec crack;
    crack.width = u(5.0, 7.0);
    crack.intensity = 0.25;
    const int vertices = 5;
    const double y0 = u(30, 226);
    for (int i = 0; i < vertices; ++i) {
        const double x = 12.0 + (256.0 - 24.0) * i / (vertices - 1);
        crack.points.push_back({x, std::clamp(y0 + u(-45, 45), 12.0, 244.0)});
    }
    s.cracks.push_back(crack);

    crackvote::StripeSpec stripe;
    const double sx = u(80, 176);  // keep >= 40 px of road between stripe and border
    stripe.from = {sx, 0.0};
    stripe.to = {sx + u(-20, 20), 255.0};
    stripe.width = 40;
    stripe.intensity = 1.0;
    s.stripes.push_back(stripe);

    s.speck_count = 200;
    s.speck_intensity = 0.25;
    s.speck_min_radius = 1;
    s.speck_max_radius = 2;
    s.speck_clearance = 8.0;
    return s;
}

/// Faint straight crack under a strong left-to-right illumination ramp.
inline crackvote::SyntheticSceneSpec gradient_scene(std::uint64_t seed = 3) {
    crackvote::SyntheticSceneSpec s;
    s.width = 256;
    s.height = 256;
    s.seed = seed;
    s.background = 0.8;
    s.noise = 0.01;
    s.illumination_left = 0.3;
    s.illumination_right = 1.0;
    s.cracks.push_back({{{8, 100}, {248, 150}}, 6.0, 0.65});
    return s;
}

/// One 20-px-wide crack, for window-size behavior of the local threshold.
inline crackvote::SyntheticSceneSpec wide_crack_scene(std::uint64_t seed = 5) {
    crackvote::SyntheticSceneSpec s;
    s.width = 256;
    s.height = 256;
    s.seed = seed;
    s.background = 0.7;
    s.noise = 0.02;
    s.cracks.push_back({{{20, 128}, {236, 128}}, 20.0, 0.25});
    return s;
}

/// Noise-free bottom-hat fixture: dark crack width 10, bright stripe width 40.
inline crackvote::SyntheticSceneSpec bottom_hat_scene() {
    crackvote::SyntheticSceneSpec s;
    s.width = 256;
    s.height = 256;
    s.background = 0.8;
    s.cracks.push_back({{{60, 10}, {80, 245}}, 10.0, 0.2});
    s.stripes.push_back({{170, 0}, {170, 255}, 40.0, 1.0});
    return s;
}

/// Binary fixture for single-pass scale behavior: one straight crack of the
/// given width (white on black) and optional specks, rendered as a
/// 0/1 image.
inline crackvote::SyntheticSceneSpec stick_pass_fixture(std::uint64_t seed, double width, int specks,
                                                         crackvote::Point2 from, crackvote::Point2 to) {
    crackvote::SyntheticSceneSpec s;
    s.seed = seed;
    s.background = 0.0;
    s.noise = 0.0;
    s.cracks.push_back({{from, to}, width, 1.0});
    s.speck_count = specks;
    s.speck_intensity = 1.0;
    s.speck_min_radius = 0;
    s.speck_max_radius = 2;
    s.speck_clearance = 8.0;
    return s;
}

}  // namespace cvtest
