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

// Sparse 2-D tensor voting.
//
// A voter sits at the origin with normal n. For a receiver at offset o the
// vote follows the osculating circle through both points: with l = |o| and
// theta the angle between the voter tangent and o,
//
//   arc length   s = theta * l / sin(theta)
//   curvature    k = 2 sin(theta) / l
//   decay        DF = exp(-(s^2 + c k^2) / sigma^2),
//                c  = -16 ln(0.1) (sigma - 1) / pi^2
//
// and the receiver gets DF * m m^T with m = (-sin 2theta, cos 2theta) in the
// voter frame. Votes are only cast inside the |theta| <= 45 deg cone.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "crackvote/raster.hpp"
#include "crackvote/tensor.hpp"

namespace crackvote {

/// Votes weaker than this are dropped from the fields.
inline constexpr double kFieldDecayCutoff = 0.01;

inline double decay_constant(double sigma) noexcept {
    return -16.0 * std::log(0.1) * (sigma - 1.0) / (std::numbers::pi * std::numbers::pi);
}

inline double decay(double s, double kappa, double sigma) noexcept {
    return std::exp(-(s * s + decay_constant(sigma) * kappa * kappa) / (sigma * sigma));
}

/// Half-extent of a voting field at scale sigma.
inline int field_radius(double sigma) noexcept {
    return static_cast<int>(std::ceil(3.0 * sigma));
}

struct VoteGeometry {
    double l = 0.0;
    double theta = 0.0;  // signed, radians
    double s = 0.0;
    double kappa = 0.0;
};

/// Geometry of an offset given in the voter frame (u along the tangent, v
/// along the normal). Offsets behind the voter are mirrored through it, which
/// leaves the vote unchanged.
inline VoteGeometry vote_geometry(double u, double v) noexcept {
    if (u < 0.0) {
        u = -u;
        v = -v;
    }
    VoteGeometry g;
    g.l = std::hypot(u, v);
    if (g.l == 0.0) return g;
    g.theta = std::atan2(v, u);
    const double sin_t = std::sin(std::abs(g.theta));
    if (sin_t == 0.0) {
        g.s = g.l;
        g.kappa = 0.0;
    } else {
        g.s = std::abs(g.theta) * g.l / sin_t;
        g.kappa = 2.0 * sin_t / g.l;
    }
    return g;
}

inline bool inside_vote_cone(double theta) noexcept {
    return std::abs(theta) <= std::numbers::pi / 4.0 + 1e-12;
}

namespace detail {

// Vote for a unit-normal voter; `truncate` applies the field cutoffs.
inline SymTensor2 stick_vote_impl(Vec2 n, Vec2 o, double sigma, bool truncate) noexcept {
    // voter frame: tangent t = (n.y, -n.x), normal n
    const double u = n.y * o.x - n.x * o.y;
    const double v = n.x * o.x + n.y * o.y;
    const VoteGeometry g = vote_geometry(u, v);
    if (g.l == 0.0 || !inside_vote_cone(g.theta)) return {};
    if (truncate && g.l > field_radius(sigma)) return {};
    const double df = decay(g.s, g.kappa, sigma);
    if (truncate && df < kFieldDecayCutoff) return {};
    const double cx = -std::sin(2.0 * g.theta);
    const double cy = std::cos(2.0 * g.theta);
    const Vec2 m{n.y * cx + n.x * cy, -n.x * cx + n.y * cy};
    return df * SymTensor2::stick(m);
}

}  // namespace detail

/// Stick vote from a voter with unit normal `normal` to a receiver at `offset`.
inline SymTensor2 stick_vote(Vec2 normal, Vec2 offset, double sigma) noexcept {
    return detail::stick_vote_impl(normal, offset, sigma, false);
}

/// Stick vote as stored in a voting field: zero beyond the field radius or
/// where the decay falls under kFieldDecayCutoff.
inline SymTensor2 field_stick_vote(Vec2 normal, Vec2 offset, double sigma) noexcept {
    return detail::stick_vote_impl(normal, offset, sigma, true);
}

class VotingField {
public:
    enum class Kind { stick, ball };

    VotingField(Kind kind, double sigma)
        : kind_(kind), sigma_(sigma), radius_(field_radius(sigma)),
          grid_(static_cast<std::size_t>(side()) * static_cast<std::size_t>(side())) {}

    Kind kind() const noexcept { return kind_; }
    double sigma() const noexcept { return sigma_; }
    int radius() const noexcept { return radius_; }
    int side() const noexcept { return 2 * radius_ + 1; }

    bool covers(int dx, int dy) const noexcept {
        return std::abs(dx) <= radius_ && std::abs(dy) <= radius_;
    }

    /// Zero outside the grid.
    SymTensor2 at(int dx, int dy) const noexcept {
        if (!covers(dx, dy)) return {};
        return grid_[slot(dx, dy)];
    }

    SymTensor2& mut(int dx, int dy) noexcept { return grid_[slot(dx, dy)]; }

private:
    std::size_t slot(int dx, int dy) const noexcept {
        return static_cast<std::size_t>(dy + radius_) * static_cast<std::size_t>(side()) +
               static_cast<std::size_t>(dx + radius_);
    }

    Kind kind_;
    double sigma_;
    int radius_;
    std::vector<SymTensor2> grid_;
};

inline void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ParamError("voting scale sigma must be positive, got " + std::to_string(sigma));
    }
}

/// Canonical stick field: voter at the origin with normal +y.
inline VotingField build_stick_field(double sigma) {
    check_sigma(sigma);
    VotingField f(VotingField::Kind::stick, sigma);
    const int r = f.radius();
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            f.mut(dx, dy) = field_stick_vote({0.0, 1.0}, {double(dx), double(dy)}, sigma);
    return f;
}

/// Ball vote at an arbitrary offset: the stick vote averaged over n_angles
/// voter orientations spread uniformly over [0, pi).
///
/// The orientations are laid out relative to the offset's direction with a
/// half-step shift, so the 45 deg cone edges fall exactly on cell boundaries
/// (for n_angles divisible by 4) and the quadrature is a midpoint rule over a
/// smooth integrand. This also makes the vote exactly rotation-covariant.
inline SymTensor2 ball_vote(Vec2 offset, double sigma, int n_angles = 180) {
    if (n_angles < 8) throw ParamError("ball field needs n_angles >= 8");
    const double l = offset.norm();
    if (l == 0.0) return {};
    const double alpha = std::atan2(offset.y, offset.x);
    const double step = std::numbers::pi / n_angles;
    SymTensor2 acc;
    for (int i = 0; i < n_angles; ++i) {
        const double beta = alpha + (i + 0.5) * step;  // voter tangent angle
        acc += stick_vote({-std::sin(beta), std::cos(beta)}, offset, sigma);
    }
    return (1.0 / n_angles) * acc;
}

/// Ball field on the grid. The radial cutoff is applied to the averaged
/// tensor: an offset is zeroed where DF(l, 0) < kFieldDecayCutoff, which
/// bounds every contributing stick vote.
inline VotingField build_ball_field(double sigma, int n_angles = 180) {
    check_sigma(sigma);
    if (n_angles < 8) throw ParamError("ball field needs n_angles >= 8");
    VotingField f(VotingField::Kind::ball, sigma);
    const int r = f.radius();
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double l = std::hypot(double(dx), double(dy));
            if (l == 0.0 || l > r || decay(l, 0.0, sigma) < kFieldDecayCutoff) continue;
            f.mut(dx, dy) = ball_vote({double(dx), double(dy)}, sigma, n_angles);
        }
    }
    return f;
}

/// Foreground pixels carrying tensors, stored in raster order.
class TokenField {
public:
    struct Token {
        PixelCoord at;
        SymTensor2 tensor;
    };

    TokenField(int width, int height) : index_(width, height, -1) {}

    /// Every foreground pixel becomes a unit ball token.
    static TokenField from_mask(const BinaryMask& m) {
        TokenField tf(m.width(), m.height());
        for (int y = 0; y < m.height(); ++y)
            for (int x = 0; x < m.width(); ++x)
                if (m(x, y)) tf.add({x, y}, SymTensor2::ball());
        return tf;
    }

    /// Tokens must be added in raster order.
    void add(PixelCoord p, SymTensor2 t) {
        if (!index_.contains(p)) throw ParamError("token outside field bounds");
        if (!tokens_.empty() && !(tokens_.back().at < p)) {
            throw ParamError("tokens must be added in strictly increasing raster order");
        }
        index_(p.x, p.y) = static_cast<int>(tokens_.size());
        tokens_.push_back({p, t});
    }

    int width() const noexcept { return index_.width(); }
    int height() const noexcept { return index_.height(); }
    std::size_t size() const noexcept { return tokens_.size(); }
    bool empty() const noexcept { return tokens_.empty(); }

    const std::vector<Token>& tokens() const noexcept { return tokens_; }
    std::vector<Token>& tokens() noexcept { return tokens_; }

    /// Token slot at p, or -1.
    int find(int x, int y) const noexcept {
        return index_.contains(x, y) ? index_(x, y) : -1;
    }

    BinaryMask to_mask() const {
        BinaryMask m(width(), height(), 0);
        for (const auto& t : tokens_) m(t.at.x, t.at.y) = 1;
        return m;
    }

    /// Same coordinates, tensors replaced.
    TokenField with_tensors(std::vector<SymTensor2> tensors) const {
        if (tensors.size() != tokens_.size()) throw ParamError("tensor count mismatch");
        TokenField out = *this;
        for (std::size_t i = 0; i < tokens_.size(); ++i) out.tokens_[i].tensor = tensors[i];
        return out;
    }

private:
    Raster<int> index_;
    std::vector<Token> tokens_;
};

/// Each token receives the sum of unit-strength votes from every other token
/// within the field radius. Ball voting reads the field directly; stick voting
/// orients the canonical field along each voter's principal direction e1.
/// Voters are visited in raster order, so every receiver accumulates in the
/// same fixed order.
inline TokenField sparse_vote(const TokenField& tokens, const VotingField& field) {
    std::vector<SymTensor2> acc(tokens.size());
    const int r = field.radius();
    const double sigma = field.sigma();
    const bool is_stick = field.kind() == VotingField::Kind::stick;
    const auto& list = tokens.tokens();

    for (std::size_t vi = 0; vi < list.size(); ++vi) {
        const PixelCoord p = list[vi].at;
        const Vec2 normal = is_stick ? eigen_decompose(list[vi].tensor).e1 : Vec2{};
        const int y0 = std::max(p.y - r, 0), y1 = std::min(p.y + r, tokens.height() - 1);
        const int x0 = std::max(p.x - r, 0), x1 = std::min(p.x + r, tokens.width() - 1);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const int ri = tokens.find(x, y);
                if (ri < 0 || static_cast<std::size_t>(ri) == vi) continue;
                const int dx = x - p.x, dy = y - p.y;
                acc[static_cast<std::size_t>(ri)] +=
                    is_stick ? field_stick_vote(normal, {double(dx), double(dy)}, sigma)
                             : field.at(dx, dy);
            }
        }
    }
    return tokens.with_tensors(std::move(acc));
}

/// Per-pixel stick (l1 - l2) and ball (l2) saliency; zero away from tokens.
struct SaliencyMaps {
    Raster<double> stick;
    Raster<double> ball;
};

inline SaliencyMaps saliency_maps(const TokenField& tokens) {
    SaliencyMaps s{Raster<double>(tokens.width(), tokens.height(), 0.0),
                   Raster<double>(tokens.width(), tokens.height(), 0.0)};
    for (const auto& t : tokens.tokens()) {
        const Eigen2 e = eigen_decompose(t.tensor);
        s.stick(t.at.x, t.at.y) = std::max(0.0, e.stick_saliency());
        s.ball(t.at.x, t.at.y) = std::max(0.0, e.ball_saliency());
    }
    return s;
}

}  // namespace crackvote
