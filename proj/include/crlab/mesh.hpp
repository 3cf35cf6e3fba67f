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

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crlab {

using VertexId = std::int32_t;
using ElementId = std::int32_t;
using EdgeId = std::int32_t;

inline constexpr std::int32_t kNone = -1;

/// Raised when refinement cannot restore conformity (inconsistent
/// refinement edges) or produces an invalid mesh.
class RefinementError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A triangle. The refinement edge is the side (v[0], v[1]) opposite the
/// newest vertex v[2]; local edge i is the side opposite v[i].
struct Element {
  std::array<VertexId, 3> v{};
  std::int32_t generation = 0;
  /// Element id in the mesh this one was refined from, kNone for roots.
  ElementId parent = kNone;

  static constexpr int refinement_edge = 2;
};

struct Edge {
  /// Endpoints with a < b.
  VertexId a = 0;
  VertexId b = 0;
  /// Incident elements, ordered by id; elements[1] == kNone on the boundary.
  std::array<ElementId, 2> elements{kNone, kNone};
  /// Local index (0..2) of this edge within each incident element.
  std::array<std::int8_t, 2> local{-1, -1};

  bool boundary() const { return elements[1] == kNone; }
};

/// Vertex stars, interior-edge fans and interior-edge numbering in
/// compressed row form.
struct PatchTables {
  std::vector<std::int32_t> star_offsets;
  std::vector<ElementId> star_elements;
  std::vector<std::int32_t> fan_offsets;
  std::vector<EdgeId> fan_edges;
  /// Position of an edge among the interior edges, kNone on the boundary.
  std::vector<std::int32_t> edge_to_dof;
  std::vector<EdgeId> dof_to_edge;
  std::vector<bool> boundary_vertex;

  std::span<const ElementId> star(VertexId z) const {
    return {star_elements.data() + star_offsets[z],
            star_elements.data() + star_offsets[z + 1]};
  }
  std::span<const EdgeId> interior_fan(VertexId z) const {
    return {fan_edges.data() + fan_offsets[z],
            fan_edges.data() + fan_offsets[z + 1]};
  }
};

/// Conforming triangulation of the unit square. Immutable once built;
/// refinement returns a new mesh whose vertex list extends this one.
class Mesh {
public:
  Mesh(std::vector<Point> vertices, std::vector<Element> elements);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_elements() const { return elements_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_interior_edges() const {
    return patches_.dof_to_edge.size();
  }

  const std::vector<Point> &vertices() const { return vertices_; }
  const std::vector<Element> &elements() const { return elements_; }
  const std::vector<Edge> &edges() const { return edges_; }

  const Point &vertex(VertexId z) const { return vertices_[z]; }
  const Element &element(ElementId t) const { return elements_[t]; }
  const Edge &edge(EdgeId e) const { return edges_[e]; }

  /// Edge ids of element t, index i is the side opposite vertex i.
  const std::array<EdgeId, 3> &element_edges(ElementId t) const {
    return element_edges_[t];
  }

  TriangleGeometry geometry(ElementId t) const;

  double edge_length(EdgeId e) const;
  Point edge_midpoint(EdgeId e) const;

  /// Unit normal of edge e. Interior edges point from elements[0] into
  /// elements[1]; boundary edges point outward.
  Vec2 edge_normal(EdgeId e) const;

  const PatchTables &topology() const { return patches_; }
  bool is_boundary_vertex(VertexId z) const {
    return patches_.boundary_vertex[z];
  }

  /// Throws RefinementError if a structural invariant is violated.
  void validate() const;

  /// max over elements of diameter / inradius.
  double shape_constant() const;
  double max_diameter() const;

private:
  void build_topology();

  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  std::vector<Edge> edges_;
  std::vector<std::array<EdgeId, 3>> element_edges_;
  PatchTables patches_;
};

/// The four triangles cut out of (0,1)² by its two diagonals.
Mesh unit_square_initial();

/// Quarter every marked element by two rounds of newest-vertex bisection
/// and bisect further elements until the mesh is conforming again.
Mesh refine(const Mesh &mesh, std::span<const ElementId> marked);

Mesh uniform_refine(const Mesh &mesh);

const PatchTables &topology(const Mesh &mesh);

} // namespace crlab
