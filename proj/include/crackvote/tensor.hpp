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

namespace crackvote {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double norm() const noexcept { return std::hypot(x, y); }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Symmetric 2x2 tensor [[xx, xy], [xy, yy]].
struct SymTensor2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    static SymTensor2 ball() noexcept { return {1.0, 0.0, 1.0}; }

    /// Unit stick n n^T.
    static SymTensor2 stick(Vec2 n) noexcept { return {n.x * n.x, n.x * n.y, n.y * n.y}; }

    double trace() const noexcept { return xx + yy; }

    SymTensor2& operator+=(const SymTensor2& o) noexcept {
        xx += o.xx;
        xy += o.xy;
        yy += o.yy;
        return *this;
    }
    friend SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) noexcept { return a += b; }
    friend SymTensor2 operator*(double s, const SymTensor2& t) noexcept {
        return {s * t.xx, s * t.xy, s * t.yy};
    }
    friend bool operator==(const SymTensor2&, const SymTensor2&) = default;
};

struct Eigen2 {
    double l1 = 0.0;  // larger eigenvalue
    double l2 = 0.0;
    Vec2 e1{1.0, 0.0};  // normal direction for a curve element
    Vec2 e2{0.0, 1.0};

    double stick_saliency() const noexcept { return l1 - l2; }
    double ball_saliency() const noexcept { return l2; }
};

/// Closed-form symmetric eigendecomposition, l1 >= l2, e2 = e1 rotated by +90 deg.
inline Eigen2 eigen_decompose(const SymTensor2& t) noexcept {
    const double half_tr = 0.5 * (t.xx + t.yy);
    const double half_diff = 0.5 * (t.xx - t.yy);
    const double r = std::hypot(half_diff, t.xy);
    Eigen2 e;
    e.l1 = half_tr + r;
    e.l2 = half_tr - r;
    if (r == 0.0) return e;  // isotropic: any orthonormal pair

    // Pick the better conditioned of the two eigenvector formulas.
    Vec2 v = half_diff >= 0.0 ? Vec2{half_diff + r, t.xy} : Vec2{t.xy, r - half_diff};
    const double n = v.norm();
    e.e1 = {v.x / n, v.y / n};
    e.e2 = {-e.e1.y, e.e1.x};
    return e;
}

}  // namespace crackvote
