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

#include "crlab/mesh.hpp"

#include <functional>
#include <vector>

namespace crlab {

struct ValueGrad {
  double value = 0.0;
  Vec2 grad;
};

/// Lowest-order Crouzeix-Raviart function: one midpoint value per interior
/// edge, ordered like PatchTables::dof_to_edge. Boundary midpoints are 0.
class CrFunction {
public:
  explicit CrFunction(const Mesh &mesh);
  CrFunction(const Mesh &mesh, std::vector<double> coefficients);

  /// Ψ_F^CR for an interior edge.
  static CrFunction basis(const Mesh &mesh, EdgeId edge);

  const Mesh &mesh() const { return *mesh_; }
  std::vector<double> &coefficients() { return coeffs_; }
  const std::vector<double> &coefficients() const { return coeffs_; }

  /// Midpoint value on edge e (0 on boundary edges).
  double edge_value(EdgeId e) const;

  /// Midpoint values on the three sides of t, local order.
  std::array<double, 3> local_coefficients(ElementId t) const;

  /// Constant gradient on t.
  Vec2 gradient(ElementId t) const;

  /// Trace of the restriction to t at its local vertex i.
  double vertex_trace(ElementId t, int i) const;

private:
  const Mesh *mesh_;
  std::vector<double> coeffs_;
};

/// Continuous function in hat ⊕ edge-bubble ⊕ element-bubble form, zero on
/// the boundary. Vertex and edge arrays are indexed by mesh vertex and edge
/// ids; entries on boundary vertices and edges must be 0. The element
/// array is either empty or one entry per element.
class ConformingFunction {
public:
  explicit ConformingFunction(const Mesh &mesh, bool with_element_bubbles = false);

  static ConformingFunction vertex_hat(const Mesh &mesh, VertexId z);
  static ConformingFunction edge_bubble(const Mesh &mesh, EdgeId e);
  static ConformingFunction element_bubble(const Mesh &mesh, ElementId t);

  const Mesh &mesh() const { return *mesh_; }

  std::vector<double> &vertex_coefficients() { return vertex_; }
  const std::vector<double> &vertex_coefficients() const { return vertex_; }
  std::vector<double> &edge_coefficients() { return edge_; }
  const std::vector<double> &edge_coefficients() const { return edge_; }
  std::vector<double> &element_coefficients() { return element_; }
  const std::vector<double> &element_coefficients() const { return element_; }

  bool has_element_bubbles() const { return !element_.empty(); }
  void enable_element_bubbles();

  /// True when all boundary vertex and edge coefficients vanish.
  bool vanishes_on_boundary() const;

private:
  const Mesh *mesh_;
  std::vector<double> vertex_;
  std::vector<double> edge_;
  std::vector<double> element_;
};

ValueGrad eval_cr(const CrFunction &f, ElementId t, const Bary &point);

ValueGrad eval_conforming(const ConformingFunction &g, ElementId t,
                          const Bary &point);

/// ∥∇Ψ_T∥ over T, Ψ_T = λ0λ1λ2.
double element_bubble_energy(const Mesh &mesh, ElementId t);

/// ∥∇Ψ_F∥ over ω_F, Ψ_F = λ_aλ_b. Throws std::invalid_argument on a
/// boundary edge.
double edge_bubble_energy(const Mesh &mesh, EdgeId e);

/// Either an element or an edge.
struct BubbleId {
  enum class Kind { element, edge } kind;
  std::int32_t id;
};

double bubble_energy(const Mesh &mesh, BubbleId k);

/// CR interpolant from edge means. `edge_mean(a, b)` must return the mean
/// of v over the segment [a, b].
CrFunction interpolate_cr(
    const Mesh &mesh,
    const std::function<double(const Point &, const Point &)> &edge_mean);

/// CR interpolant of a pointwise function, edge means by 5-point Gauss.
CrFunction interpolate_cr(const Mesh &mesh,
                          const std::function<double(const Point &)> &v);

/// Exact CR interpolant of a conforming function.
CrFunction interpolate_cr(const ConformingFunction &g);

} // namespace crlab
