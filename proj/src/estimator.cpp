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

#include "crlab/estimator.hpp"

#include "crlab/transfer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace crlab {
namespace {

// ∫_T ∇(λ_aλ_b) = |T|/3 (∇λ_a + ∇λ_b) for the bubble of local side i.
Vec2 edge_bubble_gradient_mean(const TriangleGeometry &geo, int side) {
  return (geo.area() / 3.0) *
         (geo.grad_lambda((side + 1) % 3) + geo.grad_lambda((side + 2) % 3));
}

// |⟨f,Ψ_F⟩ - ∫∇_h u_h·∇Ψ_F| / ∥∇Ψ_F∥ for every interior edge, 0 elsewhere.
std::vector<double> edge_bubble_residuals(const CrFunction &uh,
                                          const Loads &loads) {
  const Mesh &mesh = uh.mesh();
  std::vector<double> r(loads.edge);
  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t) {
    const auto geo = mesh.geometry(t);
    const Vec2 g = uh.gradient(t);
    const auto &ee = mesh.element_edges(t);
    for (int i = 0; i < 3; ++i)
      r[ee[i]] -= dot(g, edge_bubble_gradient_mean(geo, i));
  }
  for (EdgeId e = 0; e < static_cast<EdgeId>(mesh.num_edges()); ++e)
    r[e] = mesh.edge(e).boundary()
               ? 0.0
               : std::abs(r[e]) / edge_bubble_energy(mesh, e);
  return r;
}

Loads loads_for(const CrFunction &uh, const SourceTerm &f) {
  return load_vectors(f, uh.mesh(), clip_to_line(uh.mesh(), f.lambda()));
}

double sum(const std::vector<double> &v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

} // namespace

std::string_view to_string(Variant v) {
  return v == Variant::cr ? "cr" : "crtilde";
}

Variant parse_variant(std::string_view s) {
  if (s == "cr")
    return Variant::cr;
  if (s == "crtilde" || s == "cr-tilde" || s == "cr_tilde")
    return Variant::cr_tilde;
  throw std::invalid_argument("unknown estimator variant '" + std::string(s) +
                              "'");
}

std::vector<double> ncf_avg(const CrFunction &uh) {
  const Mesh &mesh = uh.mesh();
  const ConformingFunction avg = average_acr(uh);
  const auto &av = avg.vertex_coefficients();
  std::vector<double> out(mesh.num_elements());
  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t) {
    const auto geo = mesh.geometry(t);
    const auto &v = mesh.element(t).v;
    Vec2 d = uh.gradient(t);
    for (int i = 0; i < 3; ++i)
      d -= av[v[i]] * geo.grad_lambda(i);
    out[t] = geo.area() * dot(d, d);
  }
  return out;
}

// The jump along F is affine with zero mean, so with endpoint value ±d
// ∫_F |⟦u_h⟧|² = |F| d²/3 and the scaled contribution is d²/3.
std::vector<double> ncf_jump(const CrFunction &uh) {
  const Mesh &mesh = uh.mesh();
  std::vector<double> out(mesh.num_elements(), 0.0);
  auto trace_at = [&](ElementId t, VertexId z) {
    const auto &v = mesh.element(t).v;
    return uh.vertex_trace(t, v[0] == z ? 0 : (v[1] == z ? 1 : 2));
  };
  for (EdgeId e = 0; e < static_cast<EdgeId>(mesh.num_edges()); ++e) {
    const auto &ed = mesh.edge(e);
    double d = trace_at(ed.elements[0], ed.a);
    if (!ed.boundary())
      d -= trace_at(ed.elements[1], ed.a);
    const double value = d * d / 3.0;
    if (ed.boundary()) {
      out[ed.elements[0]] += value;
    } else {
      out[ed.elements[0]] += 0.5 * value;
      out[ed.elements[1]] += 0.5 * value;
    }
  }
  return out;
}

std::vector<double> eta_crtilde(const CrFunction &uh, const Loads &loads) {
  const Mesh &mesh = uh.mesh();
  std::vector<double> out(mesh.num_elements());
  // ∫_T ∇u_h·∇Ψ_T vanishes: u_h is affine on T and Ψ_T is zero on ∂T.
  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t)
    out[t] = std::abs(loads.element[t]) / element_bubble_energy(mesh, t);
  return out;
}

std::vector<double> eta_crtilde(const CrFunction &uh, const SourceTerm &f) {
  return eta_crtilde(uh, loads_for(uh, f));
}

std::vector<double> eta_cr(const CrFunction &uh, const Loads &loads) {
  const Mesh &mesh = uh.mesh();
  std::vector<double> out = eta_crtilde(uh, loads);
  const std::vector<double> faces = edge_bubble_residuals(uh, loads);
  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t)
    for (EdgeId e : mesh.element_edges(t))
      out[t] = std::max(out[t], faces[e]);
  return out;
}

std::vector<double> eta_cr(const CrFunction &uh, const SourceTerm &f) {
  return eta_cr(uh, loads_for(uh, f));
}

double patch_residual_norm(const CrFunction &uh, const Loads &loads,
                           VertexId z) {
  const Mesh &mesh = uh.mesh();
  if (z < 0 || z >= static_cast<VertexId>(mesh.num_vertices()))
    throw std::out_of_range("vertex id out of range");
  const auto &pt = mesh.topology();
  const auto star = pt.star(z);
  const auto fan = pt.interior_fan(z);

  // Basis: element bubbles of the star, then the face bubbles of the fan.
  const auto n = static_cast<Eigen::Index>(star.size() + fan.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd g(n);
  auto fan_index = [&](EdgeId e) -> Eigen::Index {
    const auto it = std::find(fan.begin(), fan.end(), e);
    return it == fan.end()
               ? -1
               : static_cast<Eigen::Index>(star.size() + (it - fan.begin()));
  };

  for (std::size_t k = 0; k < star.size(); ++k)
    g(static_cast<Eigen::Index>(k)) = loads.element[star[k]];
  for (std::size_t k = 0; k < fan.size(); ++k)
    g(static_cast<Eigen::Index>(star.size() + k)) = loads.edge[fan[k]];

  for (std::size_t k = 0; k < star.size(); ++k) {
    const ElementId t = star[k];
    const auto geo = mesh.geometry(t);
    const auto &ee = mesh.element_edges(t);
    const Vec2 grad_uh = uh.gradient(t);

    // Local members: the element bubble and the sides of t in the fan.
    std::array<Eigen::Index, 4> idx{static_cast<Eigen::Index>(k), -1, -1, -1};
    for (int i = 0; i < 3; ++i) {
      idx[i + 1] = fan_index(ee[i]);
      if (idx[i + 1] >= 0)
        g(idx[i + 1]) -= dot(grad_uh, edge_bubble_gradient_mean(geo, i));
    }
    for (const auto &q : quadrature::triangle_degree7()) {
      const auto &l = q.lambda;
      std::array<Vec2, 4> grads{
          l[1] * l[2] * geo.grad_lambda(0) + l[0] * l[2] * geo.grad_lambda(1) +
              l[0] * l[1] * geo.grad_lambda(2),
          {},
          {},
          {}};
      for (int i = 0; i < 3; ++i) {
        const int a = (i + 1) % 3, b = (i + 2) % 3;
        grads[i + 1] = l[a] * geo.grad_lambda(b) + l[b] * geo.grad_lambda(a);
      }
      const double w = q.weight * geo.area();
      for (int r = 0; r < 4; ++r) {
        if (idx[r] < 0)
          continue;
        for (int c = 0; c < 4; ++c)
          if (idx[c] >= 0)
            gram(idx[r], idx[c]) += w * dot(grads[r], grads[c]);
      }
    }
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::logic_error("patch Gram matrix at vertex " + std::to_string(z) +
                           " is singular");
  return g.dot(llt.solve(g));
}

double patch_residual_norm(const CrFunction &uh, const SourceTerm &f,
                           VertexId z) {
  return patch_residual_norm(uh, loads_for(uh, f), z);
}

std::vector<double> patch_residual_per_element(const CrFunction &uh,
                                               const Loads &loads) {
  const Mesh &mesh = uh.mesh();
  std::vector<double> out(mesh.num_elements(), 0.0);
  for (VertexId z = 0; z < static_cast<VertexId>(mesh.num_vertices()); ++z) {
    const auto star = mesh.topology().star(z);
    const double share =
        patch_residual_norm(uh, loads, z) / static_cast<double>(star.size());
    for (ElementId t : star)
      out[t] += share;
  }
  return out;
}

std::vector<double> surrogate_osc(const SourceTerm &f, const Mesh &mesh,
                                  const ClipTable &clips) {
  std::vector<double> out(mesh.num_elements());
  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t) {
    const auto geo = mesh.geometry(t);
    double integral = 0.0;
    for_each_volume_point(mesh, clips, t,
                          [&](const Bary &, const Point &x, double w, Side s) {
                            integral += w * f.regular(x, s);
                          });
    const double mean = integral / geo.area();
    double variance = 0.0;
    for_each_volume_point(mesh, clips, t,
                          [&](const Bary &, const Point &x, double w, Side s) {
                            const double d = f.regular(x, s) - mean;
                            variance += w * d * d;
                          });
    const double h2 = geo.diameter() * geo.diameter();
    double value = h2 * variance;
    if (f.line())
      if (const ClipRecord *rec = clips.find(t)) {
        const double m = f.line()->max_abs(rec->lower.y, rec->upper.y);
        value += h2 * m * m;
      }
    out[t] = value;
  }
  return out;
}

std::vector<double> surrogate_osc(const SourceTerm &f, const Mesh &mesh) {
  return surrogate_osc(f, mesh, clip_to_line(mesh, f.lambda()));
}

ExactError exact_error(const CrFunction &uh, const ExactSolution &u) {
  const Mesh &mesh = uh.mesh();
  const ClipTable clips = clip_to_line(mesh, u.lambda());
  ExactError out;
  out.per_element.assign(mesh.num_elements(), 0.0);
  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t) {
    const Vec2 gh = uh.gradient(t);
    double local = 0.0;
    for_each_volume_point(mesh, clips, t,
                          [&](const Bary &, const Point &x, double w, Side s) {
                            const Vec2 d = u(x, s).grad - gh;
                            local += w * dot(d, d);
                          });
    out.per_element[t] = local;
  }
  out.global = std::sqrt(sum(out.per_element));
  return out;
}

EstimatorReport combine(EstimatorParts parts, double c1, double c2,
                        Variant variant, std::optional<double> err) {
  const std::size_t n = parts.ncf2.size();
  if (parts.eta2.size() != n || parts.osc2.size() != n)
    throw std::invalid_argument(
        "estimator parts were computed on different meshes");
  EstimatorReport r;
  r.variant = variant;
  r.c1 = c1;
  r.c2 = c2;
  r.total2.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    r.total2[t] = parts.ncf2[t] + c1 * c1 * parts.eta2[t] +
                  c2 * c2 * parts.osc2[t];
  r.ncf = std::sqrt(sum(parts.ncf2));
  r.eta = std::sqrt(sum(parts.eta2));
  r.osc = std::sqrt(sum(parts.osc2));
  r.est = std::sqrt(r.ncf * r.ncf + c1 * c1 * r.eta * r.eta +
                    c2 * c2 * r.osc * r.osc);
  r.ncf2 = std::move(parts.ncf2);
  r.eta2 = std::move(parts.eta2);
  r.osc2 = std::move(parts.osc2);
  r.err = err;
  if (err && *err > 0.0)
    r.effectivity = r.est / *err;
  return r;
}

double eoc(double err_prev, std::size_t n_prev, double err, std::size_t n) {
  return std::log(err / err_prev) /
         std::log(static_cast<double>(n_prev) / static_cast<double>(n));
}

Estimates estimate(const CrFunction &uh, const SourceTerm &f,
                   const ExactSolution *u, double c1, double c2) {
  const Mesh &mesh = uh.mesh();
  const ClipTable clips = clip_to_line(mesh, f.lambda());
  const Loads loads = load_vectors(f, mesh, clips);

  std::vector<double> ncf2 = ncf_avg(uh);
  std::vector<double> osc2 = surrogate_osc(f, mesh, clips);
  auto squared = [](std::vector<double> v) {
    for (double &x : v)
      x *= x;
    return v;
  };

  Estimates out;
  if (u)
    out.error = exact_error(uh, *u);
  const auto err =
      out.error ? std::optional<double>(out.error->global) : std::nullopt;
  out.cr = combine({ncf2, squared(eta_cr(uh, loads)), osc2}, c1, c2,
                   Variant::cr, err);
  out.cr_tilde = combine({std::move(ncf2), squared(eta_crtilde(uh, loads)),
                          std::move(osc2)},
                         c1, c2, Variant::cr_tilde, err);
  return out;
}

} // namespace crlab
