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

#include "crlab/fe_spaces.hpp"
#include "crlab/mesh.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace testing {

inline oracle::P op(const crlab::Point &p) { return {p.x, p.y}; }

struct Tri {
  oracle::P a, b, c;
};

inline Tri corners(const crlab::Mesh &mesh, crlab::ElementId t) {
  const auto &v = mesh.element(t).v;
  return {op(mesh.vertex(v[0])), op(mesh.vertex(v[1])), op(mesh.vertex(v[2]))};
}

inline double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline crlab::Mesh level(int k) {
  auto m = crlab::unit_square_initial();
  for (int i = 0; i < k; ++i)
    m = crlab::uniform_refine(m);
  return m;
}

// Adaptively graded mesh: repeatedly refines the elements touching a
// random point, so meshes carry hanging-node closures of several depths.
inline crlab::Mesh graded(int steps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto m = crlab::unit_square_initial();
  for (int s = 0; s < steps; ++s) {
    const oracle::P x{u(rng), u(rng)};
    std::vector<crlab::ElementId> marked;
    for (crlab::ElementId t = 0; t < static_cast<crlab::ElementId>(m.num_elements());
         ++t) {
      const auto tri = corners(m, t);
      const auto l = oracle::bary(tri.a, tri.b, tri.c, x);
      if (*std::min_element(l.begin(), l.end()) >= -1e-12)
        marked.push_back(t);
    }
    m = crlab::refine(m, marked);
  }
  return m;
}

inline crlab::CrFunction random_cr(const crlab::Mesh &mesh, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(mesh.num_interior_edges());
  for (auto &x : c)
    x = u(rng);
  return {mesh, std::move(c)};
}

// Random element of the hat ⊕ edge-bubble ⊕ element-bubble space.
inline crlab::ConformingFunction random_conforming(const crlab::Mesh &mesh,
                                                   std::mt19937_64 &rng,
                                                   bool bubbles = true) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  crlab::ConformingFunction g(mesh, bubbles);
  for (crlab::VertexId z = 0; z < static_cast<crlab::VertexId>(mesh.num_vertices());
       ++z)
    if (!mesh.is_boundary_vertex(z))
      g.vertex_coefficients()[z] = u(rng);
  if (bubbles) {
    for (crlab::EdgeId e = 0; e < static_cast<crlab::EdgeId>(mesh.num_edges()); ++e)
      if (!mesh.edge(e).boundary())
        g.edge_coefficients()[e] = u(rng);
    for (auto &c : g.element_coefficients())
      c = u(rng);
  }
  return g;
}

// Random continuous piecewise linear function vanishing on the boundary,
// as a CR function.
inline crlab::CrFunction random_p1(const crlab::Mesh &mesh, std::mt19937_64 &rng) {
  return crlab::interpolate_cr(random_conforming(mesh, rng, false));
}

} // namespace testing
