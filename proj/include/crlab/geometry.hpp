// Copyright 2026 The crlab Authors.
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

#include <algorithm>
#include <array>
#include <cmath>

namespace crlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
};

using Point = Vec2;

constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr bool operator==(const Vec2 &a, const Vec2 &b) {
  return a.x == b.x && a.y == b.y;
}

constexpr double dot(const Vec2 &a, const Vec2 &b) {
  return a.x * b.x + a.y * b.y;
}
constexpr double cross(const Vec2 &a, const Vec2 &b) {
  return a.x * b.y - a.y * b.x;
}
inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }
constexpr Vec2 midpoint(const Vec2 &a, const Vec2 &b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

/// Barycentric coordinates (λ0, λ1, λ2) with λ0 + λ1 + λ2 = 1.
using Bary = std::array<double, 3>;

/// Affine geometry of one triangle: area, barycentric gradients and the
/// maps between physical and barycentric coordinates.
class TriangleGeometry {
public:
  TriangleGeometry(const Point &p0, const Point &p1, const Point &p2)
      : p_{p0, p1, p2} {
    const double det = cross(p1 - p0, p2 - p0);
    signed_area_ = 0.5 * det;
    // ∇λ_i is the inward normal of the opposite side scaled by 1/(2|T|).
    for (int i = 0; i < 3; ++i) {
      const Point &a = p_[(i + 1) % 3];
      const Point &b = p_[(i + 2) % 3];
      grad_[i] = Vec2{a.y - b.y, b.x - a.x} * (1.0 / det);
    }
  }

  double signed_area() const { return signed_area_; }
  double area() const { return std::abs(signed_area_); }
  const Point &vertex(int i) const { return p_[i]; }
  const Vec2 &grad_lambda(int i) const { return grad_[i]; }

  Point to_physical(const Bary &l) const {
    return l[0] * p_[0] + l[1] * p_[1] + l[2] * p_[2];
  }

  Bary to_barycentric(const Point &x) const {
    Bary l{};
    for (int i = 0; i < 3; ++i) {
      const Point &a = p_[(i + 1) % 3];
      l[i] = dot(grad_[i], x - a);
    }
    return l;
  }

  /// Longest side.
  double diameter() const {
    return std::max({norm(p_[1] - p_[0]), norm(p_[2] - p_[1]),
                     norm(p_[0] - p_[2])});
  }

  double perimeter() const {
    return norm(p_[1] - p_[0]) + norm(p_[2] - p_[1]) + norm(p_[0] - p_[2]);
  }

  /// Inradius 2|T| / perimeter.
  double inradius() const { return 2.0 * area() / perimeter(); }

private:
  std::array<Point, 3> p_;
  std::array<Vec2, 3> grad_{};
  double signed_area_ = 0.0;
};

} // namespace crlab
