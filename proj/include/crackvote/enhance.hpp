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

// Multi-scale iterative crack enhancement.
//
//   round 1: ball-encode the binarized pixels, sparse ball vote (sigma_ball),
//            drop tokens with stick saliency below t_stick1, keep the ball
//            saliency mask (> t_ball), then sparse stick vote (sigma_stick1)
//            and keep stick saliency > t_stick2.
//   round 2: re-encode the survivors as balls, sparse ball vote, sparse
//            stick vote at the larger sigma_stick2, keep stick saliency > t_stick3.
//   merge:   union of the round-2 stick mask and the round-1 ball mask,
//            then small-component removal and spur pruning.
//
// All saliency thresholds are fractions of the maximum saliency among the
// tokens of the pass they apply to.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "crackvote/cleanup.hpp"
#include "crackvote/raster.hpp"
#include "crackvote/voting.hpp"

namespace crackvote {

struct MultiScaleParams {
    double sigma_ball = 5.0;
    double sigma_ball2 = 0.0;  // round-2 ball scale; <= 0 reuses sigma_ball
    double sigma_stick1 = 5.0;
    double sigma_stick2 = 15.0;
    double t_stick1 = 0.05;
    double t_ball = 0.40;
    double t_stick2 = 0.20;
    double t_stick3 = 0.25;
    int ball_angles = 180;
    int min_area = 20;
    int connectivity = 8;
    int spur_iterations = 3;

    double round2_ball_sigma() const noexcept {
        return sigma_ball2 > 0.0 ? sigma_ball2 : sigma_ball;
    }

    void validate() const {
        auto unit = [](double v, const char* name) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ParamError(std::string(name) + " must be in [0,1], got " + std::to_string(v));
            }
        };
        check_sigma(sigma_ball);
        check_sigma(sigma_stick1);
        check_sigma(sigma_stick2);
        if (sigma_ball2 > 0.0) check_sigma(sigma_ball2);
        if (!(sigma_stick1 < sigma_stick2)) {
            throw ParamError("sigma_stick1 must be smaller than sigma_stick2");
        }
        unit(t_stick1, "t_stick1");
        unit(t_ball, "t_ball");
        unit(t_stick2, "t_stick2");
        unit(t_stick3, "t_stick3");
        if (!(t_stick2 < t_stick3)) throw ParamError("t_stick2 must be smaller than t_stick3");
        if (ball_angles < 8) throw ParamError("ball_angles must be >= 8");
        if (min_area < 1) throw ParamError("min_area must be >= 1");
        if (connectivity != 4 && connectivity != 8) throw ParamError("connectivity must be 4 or 8");
        if (spur_iterations < 0) throw ParamError("spur_iterations must be >= 0");
    }

    friend bool operator==(const MultiScaleParams&, const MultiScaleParams&) = default;
};

/// Receives intermediate saliency maps, e.g. "round1_ball_stick".
using SaliencySink = std::function<void(const std::string& name, const SaliencyMaps& maps)>;

/// Builds and caches voting fields by (kind, sigma, angles).
class FieldCache {
public:
    explicit FieldCache(int ball_angles = 180) : ball_angles_(ball_angles) {}

    const VotingField& ball(double sigma) {
        auto it = ball_.find(sigma);
        if (it == ball_.end()) it = ball_.emplace(sigma, build_ball_field(sigma, ball_angles_)).first;
        return it->second;
    }

    const VotingField& stick(double sigma) {
        auto it = stick_.find(sigma);
        if (it == stick_.end()) it = stick_.emplace(sigma, build_stick_field(sigma)).first;
        return it->second;
    }

private:
    int ball_angles_;
    std::map<double, VotingField> ball_;
    std::map<double, VotingField> stick_;
};

namespace detail {

inline double max_of(const Raster<double>& r) {
    double m = 0.0;
    for (double v : r.pixels()) m = std::max(m, v);
    return m;
}

// Tokens whose saliency is above (strict) or at least (!strict) frac * max.
inline BinaryMask select_tokens(const TokenField& tokens, const Raster<double>& saliency,
                                double frac, bool strict) {
    BinaryMask out(tokens.width(), tokens.height(), 0);
    const double top = max_of(saliency);
    if (!(top > 0.0)) return out;
    const double cut = frac * top;
    for (const auto& t : tokens.tokens()) {
        const double s = saliency(t.at.x, t.at.y);
        if (strict ? s > cut : s >= cut) out(t.at.x, t.at.y) = 1;
    }
    return out;
}

// Keeps the tokens set in `keep`, carrying their tensors along.
inline TokenField restrict_tokens(const TokenField& tokens, const BinaryMask& keep) {
    TokenField out(tokens.width(), tokens.height());
    for (const auto& t : tokens.tokens())
        if (keep(t.at.x, t.at.y)) out.add(t.at, t.tensor);
    return out;
}

}  // namespace detail

/// One ball pass followed by one stick pass at the same scale; returns the
/// stick-voted tokens. Used for single-scale comparisons.
inline TokenField ball_then_stick(const BinaryMask& mask, double sigma, FieldCache& fields) {
    TokenField tokens = TokenField::from_mask(mask);
    if (tokens.empty()) return tokens;
    TokenField oriented = sparse_vote(tokens, fields.ball(sigma));
    return sparse_vote(oriented, fields.stick(sigma));
}

/// Single-scale stick pass thresholded at `frac` of the maximum stick saliency.
inline BinaryMask single_scale_stick_mask(const BinaryMask& mask, double sigma, double frac,
                                          int ball_angles = 180) {
    FieldCache fields(ball_angles);
    const TokenField voted = ball_then_stick(mask, sigma, fields);
    if (voted.empty()) return BinaryMask(mask.width(), mask.height(), 0);
    return detail::select_tokens(voted, saliency_maps(voted).stick, frac, true);
}

inline BinaryMask multiscale_enhance(const BinaryMask& mask, const MultiScaleParams& p = {},
                                     const SaliencySink& sink = {}) {
    p.validate();
    BinaryMask empty(mask.width(), mask.height(), 0);
    FieldCache fields(p.ball_angles);
    auto dump = [&](const std::string& name, const TokenField& tf) {
        if (sink) sink(name, saliency_maps(tf));
    };

    // round 1
    const TokenField encoded = TokenField::from_mask(mask);
    if (encoded.empty()) return empty;
    const TokenField balled = sparse_vote(encoded, fields.ball(p.sigma_ball));
    dump("round1_ball", balled);
    const SaliencyMaps sal1 = saliency_maps(balled);
    const BinaryMask ball_mask = detail::select_tokens(balled, sal1.ball, p.t_ball, true);
    const BinaryMask pruned = detail::select_tokens(balled, sal1.stick, p.t_stick1, false);

    const TokenField oriented = detail::restrict_tokens(balled, pruned);
    BinaryMask stick_mask = empty;
    if (!oriented.empty()) {
        const TokenField sticked = sparse_vote(oriented, fields.stick(p.sigma_stick1));
        dump("round1_stick", sticked);
        stick_mask = detail::select_tokens(sticked, saliency_maps(sticked).stick, p.t_stick2, true);
    }

    // round 2
    const TokenField encoded2 = TokenField::from_mask(stick_mask);
    BinaryMask final_stick = empty;
    if (!encoded2.empty()) {
        const TokenField balled2 = sparse_vote(encoded2, fields.ball(p.round2_ball_sigma()));
        dump("round2_ball", balled2);
        const TokenField sticked2 = sparse_vote(balled2, fields.stick(p.sigma_stick2));
        dump("round2_stick", sticked2);
        final_stick = detail::select_tokens(sticked2, saliency_maps(sticked2).stick, p.t_stick3, true);
    }

    BinaryMask merged = final_stick;
    for (std::size_t i = 0; i < merged.size(); ++i) merged[i] = merged[i] | ball_mask[i];
    merged = remove_small_components(merged, p.min_area, p.connectivity);
    return binary_spur_prune(merged, p.spur_iterations);
}

}  // namespace crackvote
