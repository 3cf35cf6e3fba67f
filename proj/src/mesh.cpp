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

#include "crlab/mesh.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace crlab {
namespace {

// Two bisections per marked element plus completion never gets close to
// this; exceeding it means the refinement-edge assignment is inconsistent.
constexpr std::int32_t kMaxGeneration = 120;

std::uint64_t edge_key(VertexId a, VertexId b) {
  if (a > b)
    std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

bool on_same_square_side(const Point &p, const Point &q) {
  return (p.x == 0.0 && q.x == 0.0) || (p.x == 1.0 && q.x == 1.0) ||
         (p.y == 0.0 && q.y == 0.0) || (p.y == 1.0 && q.y == 1.0);
}

} // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Element> elements)
    : vertices_(std::move(vertices)), elements_(std::move(elements)) {
  build_topology();
}

void Mesh::build_topology() {
  const auto nt = static_cast<ElementId>(elements_.size());
  const auto nv = static_cast<VertexId>(vertices_.size());

  struct Side {
    std::uint64_t key;
    ElementId element;
    std::int8_t local;
  };
  std::vector<Side> sides;
  sides.reserve(3 * elements_.size());
  for (ElementId t = 0; t < nt; ++t) {
    const auto &v = elements_[t].v;
    for (int i = 0; i < 3; ++i) {
      if (v[i] < 0 || v[i] >= nv)
        throw RefinementError("element " + std::to_string(t) +
                              " references a missing vertex");
      sides.push_back(
          {edge_key(v[(i + 1) % 3], v[(i + 2) % 3]), t, std::int8_t(i)});
    }
  }
  std::sort(sides.begin(), sides.end(), [](const Side &l, const Side &r) {
    return l.key != r.key ? l.key < r.key : l.element < r.element;
  });

  edges_.clear();
  element_edges_.assign(elements_.size(), {kNone, kNone, kNone});
  for (std::size_t i = 0; i < sides.size();) {
    std::size_t j = i;
    while (j < sides.size() && sides[j].key == sides[i].key)
      ++j;
    if (j - i > 2)
      throw RefinementError("edge shared by more than two elements");
    Edge e;
    e.a = static_cast<VertexId>(sides[i].key >> 32);
    e.b = static_cast<VertexId>(sides[i].key & 0xffffffffu);
    const auto id = static_cast<EdgeId>(edges_.size());
    for (std::size_t k = i; k < j; ++k) {
      e.elements[k - i] = sides[k].element;
      e.local[k - i] = sides[k].local;
      element_edges_[sides[k].element][sides[k].local] = id;
    }
    if (j - i == 1 && !on_same_square_side(vertices_[e.a], vertices_[e.b]))
      throw RefinementError("non-conforming mesh: interior edge (" +
                            std::to_string(e.a) + ", " + std::to_string(e.b) +
                            ") has a single neighbour");
    edges_.push_back(e);
    i = j;
  }

  auto &pt = patches_;
  pt.boundary_vertex.assign(vertices_.size(), false);
  pt.edge_to_dof.assign(edges_.size(), kNone);
  pt.dof_to_edge.clear();
  for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
    if (edges_[e].boundary()) {
      pt.boundary_vertex[edges_[e].a] = true;
      pt.boundary_vertex[edges_[e].b] = true;
    } else {
      pt.edge_to_dof[e] = static_cast<std::int32_t>(pt.dof_to_edge.size());
      pt.dof_to_edge.push_back(e);
    }
  }

  pt.star_offsets.assign(vertices_.size() + 1, 0);
  for (const auto &el : elements_)
    for (VertexId z : el.v)
      ++pt.star_offsets[z + 1];
  for (std::size_t z = 0; z < vertices_.size(); ++z)
    pt.star_offsets[z + 1] += pt.star_offsets[z];
  pt.star_elements.assign(pt.star_offsets.back(), kNone);
  {
    std::vector<std::int32_t> fill(pt.star_offsets.begin(),
                                   pt.star_offsets.end() - 1);
    for (ElementId t = 0; t < nt; ++t)
      for (VertexId z : elements_[t].v)
        pt.star_elements[fill[z]++] = t;
  }

  pt.fan_offsets.assign(vertices_.size() + 1, 0);
  for (const auto &e : edges_)
    if (!e.boundary()) {
      ++pt.fan_offsets[e.a + 1];
      ++pt.fan_offsets[e.b + 1];
    }
  for (std::size_t z = 0; z < vertices_.size(); ++z)
    pt.fan_offsets[z + 1] += pt.fan_offsets[z];
  pt.fan_edges.assign(pt.fan_offsets.back(), kNone);
  {
    std::vector<std::int32_t> fill(pt.fan_offsets.begin(),
                                   pt.fan_offsets.end() - 1);
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e)
      if (!edges_[e].boundary()) {
        pt.fan_edges[fill[edges_[e].a]++] = e;
        pt.fan_edges[fill[edges_[e].b]++] = e;
      }
  }
}

TriangleGeometry Mesh::geometry(ElementId t) const {
  const auto &v = elements_[t].v;
  return {vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]};
}

double Mesh::edge_length(EdgeId e) const {
  return norm(vertices_[edges_[e].b] - vertices_[edges_[e].a]);
}

Point Mesh::edge_midpoint(EdgeId e) const {
  return midpoint(vertices_[edges_[e].a], vertices_[edges_[e].b]);
}

Vec2 Mesh::edge_normal(EdgeId e) const {
  const auto &ed = edges_[e];
  const Vec2 d = vertices_[ed.b] - vertices_[ed.a];
  Vec2 n{d.y, -d.x};
  n *= 1.0 / norm(d);
  const auto &v = elements_[ed.elements[0]].v;
  const Point inner = vertices_[v[ed.local[0]]];
  if (dot(n, inner - vertices_[ed.a]) > 0.0)
    n *= -1.0;
  return n;
}

void Mesh::validate() const {
  for (ElementId t = 0; t < static_cast<ElementId>(elements_.size()); ++t) {
    const auto &v = elements_[t].v;
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
      throw RefinementError("element " + std::to_string(t) +
                            " has repeated vertices");
    if (!(geometry(t).signed_area() > 0.0))
      throw RefinementError("element " + std::to_string(t) +
                            " is not positively oriented");
  }
  for (const auto &p : vertices_)
    if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0)
      throw RefinementError("vertex outside the unit square");

  // Every star must be connected through the edges around its centre.
  const auto &pt = patches_;
  for (VertexId z = 0; z < static_cast<VertexId>(vertices_.size()); ++z) {
    const auto star = pt.star(z);
    if (star.empty())
      throw RefinementError("vertex " + std::to_string(z) + " is unused");
    std::vector<ElementId> seen{star.front()};
    std::queue<ElementId> todo;
    todo.push(star.front());
    while (!todo.empty()) {
      const ElementId t = todo.front();
      todo.pop();
      for (EdgeId e : element_edges_[t]) {
        const auto &ed = edges_[e];
        if (ed.boundary() || (ed.a != z && ed.b != z))
          continue;
        const ElementId other =
            ed.elements[0] == t ? ed.elements[1] : ed.elements[0];
        if (std::find(seen.begin(), seen.end(), other) == seen.end()) {
          seen.push_back(other);
          todo.push(other);
        }
      }
    }
    if (seen.size() != star.size())
      throw RefinementError("star of vertex " + std::to_string(z) +
                            " is not edge-connected");
  }
}

double Mesh::shape_constant() const {
  double gamma = 0.0;
  for (ElementId t = 0; t < static_cast<ElementId>(elements_.size()); ++t) {
    const auto g = geometry(t);
    gamma = std::max(gamma, g.diameter() / g.inradius());
  }
  return gamma;
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (ElementId t = 0; t < static_cast<ElementId>(elements_.size()); ++t)
    h = std::max(h, geometry(t).diameter());
  return h;
}

Mesh unit_square_initial() {
  std::vector<Point> vertices{
      {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5}};
  std::vector<Element> elements{
      {{0, 1, 4}}, {{1, 2, 4}}, {{2, 3, 4}}, {{3, 0, 4}}};
  return {std::move(vertices), std::move(elements)};
}

Mesh refine(const Mesh &mesh, std::span<const ElementId> marked) {
  const auto nt = static_cast<ElementId>(mesh.num_elements());
  std::vector<std::uint8_t> edge_marked(mesh.num_edges(), 0);
  for (ElementId t : marked) {
    if (t < 0 || t >= nt)
      throw std::out_of_range("marked element " + std::to_string(t) +
                              " is not in the mesh");
    for (EdgeId e : mesh.element_edges(t))
      edge_marked[e] = 1;
  }

  // Completion: an element with any marked side must be bisected, which
  // requires its refinement edge to be marked as well.
  std::queue<ElementId> todo;
  for (ElementId t : marked)
    for (EdgeId e : mesh.element_edges(t))
      for (ElementId n : mesh.edge(e).elements)
        if (n != kNone)
          todo.push(n);
  while (!todo.empty()) {
    const ElementId t = todo.front();
    todo.pop();
    const auto &ee = mesh.element_edges(t);
    const EdgeId ref = ee[Element::refinement_edge];
    if (edge_marked[ref] || !(edge_marked[ee[0]] || edge_marked[ee[1]]))
      continue;
    edge_marked[ref] = 1;
    for (ElementId n : mesh.edge(ref).elements)
      if (n != kNone && n != t)
        todo.push(n);
  }

  std::vector<Point> vertices = mesh.vertices();
  std::vector<VertexId> edge_mid(mesh.num_edges(), kNone);
  for (EdgeId e = 0; e < static_cast<EdgeId>(mesh.num_edges()); ++e)
    if (edge_marked[e]) {
      edge_mid[e] = static_cast<VertexId>(vertices.size());
      vertices.push_back(mesh.edge_midpoint(e));
    }

  std::vector<Element> elements;
  elements.reserve(mesh.num_elements() + 3 * marked.size());

  // old_edges[i]: id in the input mesh of local side i, or kNone for sides
  // created by this call.
  auto bisect = [&](auto &&self, const Element &el,
                    const std::array<EdgeId, 3> &old_edges) -> void {
    const EdgeId ref = old_edges[Element::refinement_edge];
    if (ref == kNone || !edge_marked[ref]) {
      elements.push_back(el);
      return;
    }
    if (el.generation + 1 > kMaxGeneration)
      throw RefinementError("completion exceeded the generation bound");
    const VertexId a = el.v[0], b = el.v[1], c = el.v[2];
    const VertexId m = edge_mid[ref];
    self(self, Element{{c, a, m}, el.generation + 1, el.parent},
         {kNone, kNone, old_edges[1]});
    self(self, Element{{b, c, m}, el.generation + 1, el.parent},
         {kNone, kNone, old_edges[0]});
  };

  for (ElementId t = 0; t < nt; ++t) {
    Element el = mesh.element(t);
    el.parent = t;
    bisect(bisect, el, mesh.element_edges(t));
  }

  return {std::move(vertices), std::move(elements)};
}

Mesh uniform_refine(const Mesh &mesh) {
  std::vector<ElementId> all(mesh.num_elements());
  for (std::size_t t = 0; t < all.size(); ++t)
    all[t] = static_cast<ElementId>(t);
  return refine(mesh, all);
}

const PatchTables &topology(const Mesh &mesh) { return mesh.topology(); }

} // namespace crlab
