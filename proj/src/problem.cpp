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

#include "crlab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crlab {
namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must lie in (0, 1), got " +
                                std::to_string(lambda));
}

// Sutherland-Hodgman against the half plane sign * (x - λ) <= 0.
Polygon clip_half(const std::array<Point, 3> &tri, double lambda, double sign) {
  Polygon out;
  auto inside = [&](const Point &p) { return sign * (p.x - lambda) <= 0.0; };
  auto cut = [&](const Point &p, const Point &q) {
    const double s = (lambda - p.x) / (q.x - p.x);
    return Point{lambda, p.y + s * (q.y - p.y)};
  };
  for (int i = 0; i < 3; ++i) {
    const Point &p = tri[i];
    const Point &q = tri[(i + 1) % 3];
    const bool pin = inside(p), qin = inside(q);
    if (pin)
      out.p[out.n++] = p;
    if (pin && !qin && p.x != lambda)
      out.p[out.n++] = cut(p, q);
    else if (!pin && qin && q.x != lambda)
      out.p[out.n++] = cut(p, q);
  }
  return out;
}

} // namespace

double LineWeight::max_abs(double y0, double y1) const {
  double m = std::max(std::abs((*this)(y0)), std::abs((*this)(y1)));
  if (c[2] != 0.0) {
    const double ys = -c[1] / (2.0 * c[2]);
    if (ys > y0 && ys < y1)
      m = std::max(m, std::abs((*this)(ys)));
  }
  return m;
}

SourceTerm::SourceTerm(double lambda, Polynomial2 left, Polynomial2 right,
                       std::optional<LineWeight> line)
    : lambda_(lambda), left_(left), right_(right), line_(line) {
  check_lambda(lambda);
}

SourceTerm SourceTerm::density(const Polynomial2 &p, double lambda) {
  return {lambda, p, p};
}

SourceTerm SourceTerm::scaled(double s) const {
  Polynomial2 l = left_, r = right_;
  for (auto &c : l.c)
    c *= s;
  for (auto &c : r.c)
    c *= s;
  std::optional<LineWeight> w = line_;
  if (w)
    for (auto &c : w->c)
      c *= s;
  return {lambda_, l, r, w};
}

ExactSolution::ExactSolution(double lambda, Branch left, Branch right)
    : lambda_(lambda), left_(std::move(left)), right_(std::move(right)) {
  check_lambda(lambda);
}

Benchmark benchmark(double lambda) {
  check_lambda(lambda);
  const double l = lambda;
  // -Δu on each side.
  const Polynomial2 left{{0.0, 2.0 * l, 2.0, -2.0, 0.0, -2.0}};
  const Polynomial2 right{{-2.0 * l, 2.0 * (1.0 + l), 2.0, -2.0, 0.0, -2.0}};
  // The kink of u along Λ contributes (∂ₓu_left - ∂ₓu_right) = -y(1-y).
  const LineWeight line{{0.0, -1.0, 1.0}};

  auto u_left = [l](const Point &p) {
    const double w = p.y * (1.0 - p.y);
    return ValueGrad{p.x * (l - p.x) * w,
                     {(l - 2.0 * p.x) * w, p.x * (l - p.x) * (1.0 - 2.0 * p.y)}};
  };
  auto u_right = [l](const Point &p) {
    const double w = p.y * (1.0 - p.y);
    const double s = (1.0 - p.x) * (p.x - l);
    return ValueGrad{s * w, {(1.0 + l - 2.0 * p.x) * w, s * (1.0 - 2.0 * p.y)}};
  };
  return {SourceTerm(l, left, right, line), ExactSolution(l, u_left, u_right)};
}

double Polygon::area() const {
  double a = 0.0;
  for (int i = 0; i < n; ++i)
    a += cross(p[i], p[(i + 1) % n]);
  return 0.5 * std::abs(a);
}

ClipTable clip_to_line(const Mesh &mesh, double lambda) {
  ClipTable table;
  table.lambda = lambda;
  const auto nt = static_cast<ElementId>(mesh.num_elements());
  table.side.assign(nt, Side::left);
  table.record.assign(nt, kNone);

  for (ElementId t = 0; t < nt; ++t) {
    const auto &v = mesh.element(t).v;
    const std::array<Point, 3> tri{mesh.vertex(v[0]), mesh.vertex(v[1]),
                                   mesh.vertex(v[2])};
    const double lo = std::min({tri[0].x, tri[1].x, tri[2].x});
    const double hi = std::max({tri[0].x, tri[1].x, tri[2].x});
    if (hi < lambda || lo > lambda) {
      table.side[t] = hi < lambda ? Side::left : Side::right;
      continue;
    }
    ClipRecord rec;
    rec.element = t;
    if (lo < lambda && lambda < hi) {
      table.side[t] = Side::crossed;
      rec.split = true;
      rec.left = clip_half(tri, lambda, 1.0);
      rec.right = clip_half(tri, lambda, -1.0);
      std::vector<Point> on_line;
      for (int i = 0; i < rec.left.n; ++i)
        if (rec.left.p[i].x == lambda)
          on_line.push_back(rec.left.p[i]);
      if (on_line.size() != 2)
        throw std::logic_error("clipping produced a degenerate segment");
      rec.lower = on_line[0];
      rec.upper = on_line[1];
    } else {
      table.side[t] = hi == lambda ? Side::left : Side::right;
      std::vector<Point> on_line;
      for (const auto &p : tri)
        if (p.x == lambda)
          on_line.push_back(p);
      // Touching in a single point has no length; a side on Λ belongs to
      // the element on its left.
      if (on_line.size() != 2 || table.side[t] != Side::left)
        continue;
      rec.lower = on_line[0];
      rec.upper = on_line[1];
    }
    if (rec.lower.y > rec.upper.y)
      std::swap(rec.lower, rec.upper);
    table.record[t] = static_cast<std::int32_t>(table.records.size());
    table.records.push_back(rec);
  }
  return table;
}

double apply(const SourceTerm &f, const ConformingFunction &g) {
  return apply(f, g, clip_to_line(g.mesh(), f.lambda()));
}

double apply(const SourceTerm &f, const ConformingFunction &g,
             const ClipTable &clips) {
  if (!g.vanishes_on_boundary())
    throw std::invalid_argument(
        "source terms act only on functions vanishing on the boundary");
  const Mesh &mesh = g.mesh();
  if (clips.side.size() != mesh.num_elements() || clips.lambda != f.lambda())
    throw std::invalid_argument("clip table does not match source and mesh");
  double sum = 0.0;
  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t) {
    for_each_volume_point(
        mesh, clips, t,
        [&](const Bary &l, const Point &x, double w, Side s) {
          sum += w * f.regular(x, s) * eval_conforming(g, t, l).value;
        });
    if (f.line())
      for_each_line_point(mesh, clips, t,
                          [&](const Bary &l, const Point &x, double w) {
                            sum += w * (*f.line())(x.y) *
                                   eval_conforming(g, t, l).value;
                          });
  }
  return sum;
}

Loads load_vectors(const SourceTerm &f, const Mesh &mesh,
                   const ClipTable &clips) {
  if (clips.side.size() != mesh.num_elements() || clips.lambda != f.lambda())
    throw std::invalid_argument("clip table does not match source and mesh");
  Loads loads;
  loads.vertex.assign(mesh.num_vertices(), 0.0);
  loads.edge.assign(mesh.num_edges(), 0.0);
  loads.element.assign(mesh.num_elements(), 0.0);

  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t) {
    std::array<double, 3> hat{}, bubble{};
    double cubic = 0.0;
    auto accumulate = [&](const Bary &l, double fw) {
      for (int i = 0; i < 3; ++i) {
        hat[i] += fw * l[i];
        bubble[i] += fw * l[(i + 1) % 3] * l[(i + 2) % 3];
      }
      cubic += fw * l[0] * l[1] * l[2];
    };
    for_each_volume_point(mesh, clips, t,
                          [&](const Bary &l, const Point &x, double w, Side s) {
                            accumulate(l, w * f.regular(x, s));
                          });
    if (f.line())
      for_each_line_point(mesh, clips, t,
                          [&](const Bary &l, const Point &x, double w) {
                            accumulate(l, w * (*f.line())(x.y));
                          });
    const auto &v = mesh.element(t).v;
    const auto &ee = mesh.element_edges(t);
    for (int i = 0; i < 3; ++i) {
      loads.vertex[v[i]] += hat[i];
      loads.edge[ee[i]] += bubble[i];
    }
    loads.element[t] = cubic;
  }

  for (VertexId z = 0; z < static_cast<VertexId>(mesh.num_vertices()); ++z)
    if (mesh.is_boundary_vertex(z))
      loads.vertex[z] = 0.0;
  for (EdgeId e = 0; e < static_cast<EdgeId>(mesh.num_edges()); ++e)
    if (mesh.edge(e).boundary())
      loads.edge[e] = 0.0;
  return loads;
}

double energy_product(const ExactSolution &u, const ConformingFunction &g) {
  const Mesh &mesh = g.mesh();
  const ClipTable clips = clip_to_line(mesh, u.lambda());
  double sum = 0.0;
  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t)
    for_each_volume_point(
        mesh, clips, t, [&](const Bary &l, const Point &x, double w, Side s) {
          sum += w * dot(u(x, s).grad, eval_conforming(g, t, l).grad);
        });
  return sum;
}

} // namespace crlab
