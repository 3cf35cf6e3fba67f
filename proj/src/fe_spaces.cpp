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

#include "crlab/fe_spaces.hpp"

#include "crlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crlab {
namespace {

void check_element(const Mesh &mesh, ElementId t) {
  if (t < 0 || t >= static_cast<ElementId>(mesh.num_elements()))
    throw std::out_of_range("element id " + std::to_string(t) +
                            " out of range");
}

void check_edge(const Mesh &mesh, EdgeId e) {
  if (e < 0 || e >= static_cast<EdgeId>(mesh.num_edges()))
    throw std::out_of_range("edge id " + std::to_string(e) + " out of range");
}

// Local vertex indices of the endpoints of local side i.
constexpr int side_start(int i) { return (i + 1) % 3; }
constexpr int side_end(int i) { return (i + 2) % 3; }

} // namespace

CrFunction::CrFunction(const Mesh &mesh)
    : mesh_(&mesh), coeffs_(mesh.num_interior_edges(), 0.0) {}

CrFunction::CrFunction(const Mesh &mesh, std::vector<double> coefficients)
    : mesh_(&mesh), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != mesh.num_interior_edges())
    throw std::invalid_argument("CR coefficient vector has wrong size");
}

CrFunction CrFunction::basis(const Mesh &mesh, EdgeId edge) {
  check_edge(mesh, edge);
  const auto dof = mesh.topology().edge_to_dof[edge];
  if (dof == kNone)
    throw std::invalid_argument("CR basis requested on a boundary edge");
  CrFunction f(mesh);
  f.coeffs_[dof] = 1.0;
  return f;
}

double CrFunction::edge_value(EdgeId e) const {
  const auto dof = mesh_->topology().edge_to_dof[e];
  return dof == kNone ? 0.0 : coeffs_[dof];
}

std::array<double, 3> CrFunction::local_coefficients(ElementId t) const {
  const auto &ee = mesh_->element_edges(t);
  return {edge_value(ee[0]), edge_value(ee[1]), edge_value(ee[2])};
}

// On T the side-i basis function is 1 - 2λ_i.
Vec2 CrFunction::gradient(ElementId t) const {
  const auto c = local_coefficients(t);
  const auto g = mesh_->geometry(t);
  Vec2 grad;
  for (int i = 0; i < 3; ++i)
    grad += (-2.0 * c[i]) * g.grad_lambda(i);
  return grad;
}

double CrFunction::vertex_trace(ElementId t, int i) const {
  const auto c = local_coefficients(t);
  return c[0] + c[1] + c[2] - 2.0 * c[i];
}

ConformingFunction::ConformingFunction(const Mesh &mesh,
                                       bool with_element_bubbles)
    : mesh_(&mesh), vertex_(mesh.num_vertices(), 0.0),
      edge_(mesh.num_edges(), 0.0) {
  if (with_element_bubbles)
    enable_element_bubbles();
}

void ConformingFunction::enable_element_bubbles() {
  if (element_.empty())
    element_.assign(mesh_->num_elements(), 0.0);
}

ConformingFunction ConformingFunction::vertex_hat(const Mesh &mesh,
                                                  VertexId z) {
  if (z < 0 || z >= static_cast<VertexId>(mesh.num_vertices()))
    throw std::out_of_range("vertex id out of range");
  if (mesh.is_boundary_vertex(z))
    throw std::invalid_argument("hat of a boundary vertex is not in H^1_0");
  ConformingFunction g(mesh);
  g.vertex_[z] = 1.0;
  return g;
}

ConformingFunction ConformingFunction::edge_bubble(const Mesh &mesh,
                                                   EdgeId e) {
  check_edge(mesh, e);
  if (mesh.edge(e).boundary())
    throw std::invalid_argument("edge bubble of a boundary edge");
  ConformingFunction g(mesh);
  g.edge_[e] = 1.0;
  return g;
}

ConformingFunction ConformingFunction::element_bubble(const Mesh &mesh,
                                                      ElementId t) {
  check_element(mesh, t);
  ConformingFunction g(mesh, true);
  g.element_[t] = 1.0;
  return g;
}

bool ConformingFunction::vanishes_on_boundary() const {
  for (VertexId z = 0; z < static_cast<VertexId>(vertex_.size()); ++z)
    if (mesh_->is_boundary_vertex(z) && vertex_[z] != 0.0)
      return false;
  for (EdgeId e = 0; e < static_cast<EdgeId>(edge_.size()); ++e)
    if (mesh_->edge(e).boundary() && edge_[e] != 0.0)
      return false;
  return true;
}

ValueGrad eval_cr(const CrFunction &f, ElementId t, const Bary &point) {
  check_element(f.mesh(), t);
  const auto c = f.local_coefficients(t);
  ValueGrad out;
  for (int i = 0; i < 3; ++i)
    out.value += c[i] * (1.0 - 2.0 * point[i]);
  out.grad = f.gradient(t);
  return out;
}

ValueGrad eval_conforming(const ConformingFunction &g, ElementId t,
                          const Bary &l) {
  const Mesh &mesh = g.mesh();
  check_element(mesh, t);
  const auto geo = mesh.geometry(t);
  const auto &v = mesh.element(t).v;
  const auto &ee = mesh.element_edges(t);
  auto dl = [&](int i) -> const Vec2 & { return geo.grad_lambda(i); };

  ValueGrad out;
  for (int i = 0; i < 3; ++i) {
    const double cv = g.vertex_coefficients()[v[i]];
    out.value += cv * l[i];
    out.grad += cv * dl(i);

    const int a = side_start(i), b = side_end(i);
    const double ce = g.edge_coefficients()[ee[i]];
    out.value += ce * l[a] * l[b];
    out.grad += ce * (l[a] * dl(b) + l[b] * dl(a));
  }
  if (g.has_element_bubbles()) {
    const double ct = g.element_coefficients()[t];
    out.value += ct * l[0] * l[1] * l[2];
    out.grad += ct * (l[1] * l[2] * dl(0) + l[0] * l[2] * dl(1) +
                      l[0] * l[1] * dl(2));
  }
  return out;
}

double element_bubble_energy(const Mesh &mesh, ElementId t) {
  check_element(mesh, t);
  const auto geo = mesh.geometry(t);
  double sum = 0.0;
  for (const auto &q : quadrature::triangle_degree7()) {
    const auto &l = q.lambda;
    const Vec2 g = l[1] * l[2] * geo.grad_lambda(0) +
                   l[0] * l[2] * geo.grad_lambda(1) +
                   l[0] * l[1] * geo.grad_lambda(2);
    sum += q.weight * dot(g, g);
  }
  return std::sqrt(sum * geo.area());
}

double edge_bubble_energy(const Mesh &mesh, EdgeId e) {
  check_edge(mesh, e);
  const auto &ed = mesh.edge(e);
  if (ed.boundary())
    throw std::invalid_argument(
        "edge bubble energy requested on a boundary edge");
  double sum = 0.0;
  for (int k = 0; k < 2; ++k) {
    const ElementId t = ed.elements[k];
    const int side = ed.local[k];
    const int a = side_start(side), b = side_end(side);
    const auto geo = mesh.geometry(t);
    double local = 0.0;
    for (const auto &q : quadrature::triangle_degree7()) {
      const Vec2 g =
          q.lambda[a] * geo.grad_lambda(b) + q.lambda[b] * geo.grad_lambda(a);
      local += q.weight * dot(g, g);
    }
    sum += local * geo.area();
  }
  return std::sqrt(sum);
}

double bubble_energy(const Mesh &mesh, BubbleId k) {
  return k.kind == BubbleId::Kind::element ? element_bubble_energy(mesh, k.id)
                                           : edge_bubble_energy(mesh, k.id);
}

CrFunction interpolate_cr(
    const Mesh &mesh,
    const std::function<double(const Point &, const Point &)> &edge_mean) {
  CrFunction f(mesh);
  const auto &dofs = mesh.topology().dof_to_edge;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const auto &ed = mesh.edge(dofs[i]);
    f.coefficients()[i] = edge_mean(mesh.vertex(ed.a), mesh.vertex(ed.b));
  }
  return f;
}

CrFunction interpolate_cr(const Mesh &mesh,
                          const std::function<double(const Point &)> &v) {
  return interpolate_cr(mesh, [&](const Point &a, const Point &b) {
    double mean = 0.0;
    for (const auto &q : quadrature::gauss_legendre5())
      mean += q.weight * v(a + q.t * (b - a));
    return mean;
  });
}

CrFunction interpolate_cr(const ConformingFunction &g) {
  const Mesh &mesh = g.mesh();
  CrFunction f(mesh);
  const auto &dofs = mesh.topology().dof_to_edge;
  // Hats are affine along an edge, the edge bubble has mean 1/6 on its own
  // edge and vanishes on all others, element bubbles vanish on all edges.
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const auto &ed = mesh.edge(dofs[i]);
    f.coefficients()[i] =
        0.5 * (g.vertex_coefficients()[ed.a] + g.vertex_coefficients()[ed.b]) +
        g.edge_coefficients()[dofs[i]] / 6.0;
  }
  return f;
}

} // namespace crlab
