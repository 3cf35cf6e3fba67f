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

#include "crlab/quadrature.hpp"

#include <array>

namespace crlab::quadrature {
namespace {

constexpr double a1 = 0.260345966079040;
constexpr double b1 = 1.0 - 2.0 * a1;
constexpr double a2 = 0.065130102902216;
constexpr double b2 = 1.0 - 2.0 * a2;
constexpr double r3 = 0.048690315425316;
constexpr double s3 = 0.312865496004874;
constexpr double t3 = 1.0 - r3 - s3;

constexpr double w0 = -0.149570044467682;
constexpr double w1 = 0.175615257433208;
constexpr double w2 = 0.053347235608838;
constexpr double w3 = 0.077113760890257;

constexpr std::array<TrianglePoint, 13> kTriangle7{{
    {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, w0},
    {{a1, a1, b1}, w1},
    {{a1, b1, a1}, w1},
    {{b1, a1, a1}, w1},
    {{a2, a2, b2}, w2},
    {{a2, b2, a2}, w2},
    {{b2, a2, a2}, w2},
    {{r3, s3, t3}, w3},
    {{s3, t3, r3}, w3},
    {{t3, r3, s3}, w3},
    {{s3, r3, t3}, w3},
    {{r3, t3, s3}, w3},
    {{t3, s3, r3}, w3},
}};

constexpr double g1 = 0.5384693101056831;
constexpr double g2 = 0.9061798459386640;
constexpr double v0 = 0.5688888888888889;
constexpr double v1 = 0.4786286704993665;
constexpr double v2 = 0.2369268850561891;

constexpr std::array<LinePoint, 5> kGauss5{{
    {0.5 * (1.0 - g2), 0.5 * v2},
    {0.5 * (1.0 - g1), 0.5 * v1},
    {0.5, 0.5 * v0},
    {0.5 * (1.0 + g1), 0.5 * v1},
    {0.5 * (1.0 + g2), 0.5 * v2},
}};

} // namespace

std::span<const TrianglePoint> triangle_degree7() { return kTriangle7; }

std::span<const LinePoint> gauss_legendre5() { return kGauss5; }

} // namespace crlab::quadrature
