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

#include "crlab/geometry.hpp"

#include <span>

namespace crlab::quadrature {

struct TrianglePoint {
  Bary lambda;
  /// Weight relative to the reference area; weights sum to 1.
  double weight;
};

struct LinePoint {
  /// Position in [0, 1] along the segment.
  double t;
  /// Weights sum to 1.
  double weight;
};

/// Symmetric 13-point rule, exact for polynomials of degree 7.
std::span<const TrianglePoint> triangle_degree7();

/// 5-point Gauss-Legendre rule on [0, 1], exact for degree 9.
std::span<const LinePoint> gauss_legendre5();

} // namespace crlab::quadrature
