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

#include "crlab/transfer.hpp"

#include <stdexcept>

namespace crlab {

ConformingFunction average_acr(const CrFunction &v) {
  const Mesh &mesh = v.mesh();
  ConformingFunction out(mesh);
  auto &values = out.vertex_coefficients();
  const auto &pt = mesh.topology();
  for (VertexId z = 0; z < static_cast<VertexId>(mesh.num_vertices()); ++z) {
    if (pt.boundary_vertex[z])
      continue;
    const auto star = pt.star(z);
    double sum = 0.0;
    for (ElementId t : star) {
      const auto &ids = mesh.element(t).v;
      const int local = ids[0] == z ? 0 : (ids[1] == z ? 1 : 2);
      sum += v.vertex_trace(t, local);
    }
    values[z] = sum / static_cast<double>(star.size());
  }
  return out;
}

// ∫_F Ψ_F = |F|/6 and ∫_F v = |F| v(m_F), so the bubble coefficient that
// restores the mean is 6 (v(m_F) - (Av(a) + Av(b)) / 2).
ConformingFunction smooth_ecr(const CrFunction &v) {
  ConformingFunction out = average_acr(v);
  const Mesh &mesh = v.mesh();
  const auto &dofs = mesh.topology().dof_to_edge;
  const auto &av = out.vertex_coefficients();
  auto &bubbles = out.edge_coefficients();
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const auto &ed = mesh.edge(dofs[i]);
    bubbles[dofs[i]] =
        6.0 * (v.coefficients()[i] - 0.5 * (av[ed.a] + av[ed.b]));
  }
  return out;
}

std::vector<double> smooth_ecr_transpose(const Mesh &mesh,
                                         std::span<const double> vertex_loads,
                                         std::span<const double> edge_loads) {
  if (vertex_loads.size() != mesh.num_vertices() ||
      edge_loads.size() != mesh.num_edges())
    throw std::invalid_argument("load vectors do not match the mesh");
  const auto &pt = mesh.topology();

  // ⟨f, E v⟩ = Σ_z (Av)(z) L̃_z + 6 Σ_F v(m_F) L_F with the vertex loads
  // corrected by the bubble terms, L̃_z = L_z - 3 Σ_{F ∋ z} L_F.
  std::vector<double> corrected(mesh.num_vertices(), 0.0);
  for (VertexId z = 0; z < static_cast<VertexId>(mesh.num_vertices()); ++z) {
    if (pt.boundary_vertex[z])
      continue;
    double l = vertex_loads[z];
    for (EdgeId e : pt.interior_fan(z))
      l -= 3.0 * edge_loads[e];
    corrected[z] = l / static_cast<double>(pt.star(z).size());
  }

  std::vector<double> rhs(mesh.num_interior_edges(), 0.0);
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs[i] = 6.0 * edge_loads[pt.dof_to_edge[i]];

  // (Av)(z) picks up the trace Σ_j c_j - 2 c_i of every star element.
  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t) {
    const auto &v = mesh.element(t).v;
    const auto &ee = mesh.element_edges(t);
    for (int i = 0; i < 3; ++i) {
      const double w = corrected[v[i]];
      if (w == 0.0)
        continue;
      for (int j = 0; j < 3; ++j) {
        const auto dof = pt.edge_to_dof[ee[j]];
        if (dof != kNone)
          rhs[dof] += (i == j ? -1.0 : 1.0) * w;
      }
    }
  }
  return rhs;
}

CrFunction prolongate_cr(const CrFunction &v, const Mesh &fine) {
  const Mesh &coarse = v.mesh();
  if (fine.num_vertices() < coarse.num_vertices())
    throw std::invalid_argument("fine mesh does not extend the coarse mesh");
  const auto nc = static_cast<ElementId>(coarse.num_elements());
  const auto &pt = fine.topology();
  std::vector<double> out(fine.num_interior_edges(), 0.0);
  for (ElementId t = 0; t < static_cast<ElementId>(fine.num_elements()); ++t) {
    const ElementId p = fine.element(t).parent;
    if (p < 0 || p >= nc)
      throw std::invalid_argument("fine element has no parent in the coarse mesh");
    const auto geo = coarse.geometry(p);
    const auto &ee = fine.element_edges(t);
    for (int i = 0; i < 3; ++i) {
      const auto dof = pt.edge_to_dof[ee[i]];
      if (dof == kNone)
        continue;
      // Interior edges have two elements: average the one-sided values.
      const Bary l = geo.to_barycentric(fine.edge_midpoint(ee[i]));
      out[dof] += 0.5 * eval_cr(v, p, l).value;
    }
  }
  return CrFunction(fine, std::move(out));
}

} // namespace crlab
