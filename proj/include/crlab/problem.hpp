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
#include "crlab/quadrature.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace crlab {

/// Which side of the vertical line x = λ a point belongs to.
enum class Side : std::int8_t { left = -1, crossed = 0, right = 1 };

/// c0 + c1 x + c2 y + c3 x² + c4 xy + c5 y².
struct Polynomial2 {
  std::array<double, 6> c{};

  double operator()(const Point &p) const {
    return c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x +
           c[4] * p.x * p.y + c[5] * p.y * p.y;
  }
  static Polynomial2 constant(double v) { return {{v, 0, 0, 0, 0, 0}}; }
};

/// w0 + w1 y + w2 y², the density of the line part along x = λ.
struct LineWeight {
  std::array<double, 3> c{};

  double operator()(double y) const { return c[0] + y * (c[1] + y * c[2]); }
  /// max |w| over [y0, y1].
  double max_abs(double y0, double y1) const;
};

/// H⁻¹ source acting as v ↦ ∫ f_reg v + ∫_Λ w v with Λ = {x = λ} ∩ Ω and
/// f_reg given by one quadratic on each side of Λ.
class SourceTerm {
public:
  SourceTerm(double lambda, Polynomial2 left, Polynomial2 right,
             std::optional<LineWeight> line = std::nullopt);

  /// Same density on both sides, no line part.
  static SourceTerm density(const Polynomial2 &p, double lambda = 0.5);

  double lambda() const { return lambda_; }
  const Polynomial2 &branch(Side s) const {
    return s == Side::right ? right_ : left_;
  }
  const std::optional<LineWeight> &line() const { return line_; }

  double regular(const Point &p, Side s) const { return branch(s)(p); }

  SourceTerm scaled(double s) const;

private:
  double lambda_;
  Polynomial2 left_;
  Polynomial2 right_;
  std::optional<LineWeight> line_;
};

/// Closed-form solution, one branch per side of x = λ.
class ExactSolution {
public:
  using Branch = std::function<ValueGrad(const Point &)>;

  ExactSolution(double lambda, Branch left, Branch right);

  double lambda() const { return lambda_; }
  ValueGrad operator()(const Point &p, Side s) const {
    return s == Side::right ? right_(p) : left_(p);
  }
  ValueGrad operator()(const Point &p) const {
    return (*this)(p, p.x < lambda_ ? Side::left : Side::right);
  }

private:
  double lambda_;
  Branch left_;
  Branch right_;
};

struct Benchmark {
  SourceTerm source;
  ExactSolution solution;
};

/// u = x(λ-x)y(1-y) left of Λ and (1-x)(x-λ)y(1-y) right of it, with the
/// matching source -Δu. Throws std::invalid_argument unless 0 < λ < 1.
Benchmark benchmark(double lambda);

/// Convex polygon with at most four corners.
struct Polygon {
  std::array<Point, 4> p{};
  int n = 0;

  double area() const;
};

struct ClipRecord {
  ElementId element = kNone;
  /// T ∩ Λ, lower.y <= upper.y.
  Point lower;
  Point upper;
  /// False when T only touches Λ along one of its sides.
  bool split = false;
  Polygon left;
  Polygon right;

  double length() const { return upper.y - lower.y; }
};

struct ClipTable {
  double lambda = 0.0;
  /// Per element: left, right, or crossed (split by Λ).
  std::vector<Side> side;
  /// Per element: index into `records` or kNone.
  std::vector<std::int32_t> record;
  std::vector<ClipRecord> records;

  const ClipRecord *find(ElementId t) const {
    return record[t] == kNone ? nullptr : &records[record[t]];
  }
};

/// Intersect every element with the line x = λ. A side lying on Λ is
/// attributed to the element on its left only.
ClipTable clip_to_line(const Mesh &mesh, double lambda);

/// Calls fn(lambda, x, weight, side) for every point of a rule that
/// integrates degree-7 polynomials exactly on each side of Λ within t.
/// Weights include the area.
template <class Fn>
void for_each_volume_point(const Mesh &mesh, const ClipTable &clips,
                           ElementId t, Fn &&fn) {
  const auto geo = mesh.geometry(t);
  const Side side = clips.side[t];
  if (side != Side::crossed) {
    const double area = geo.area();
    for (const auto &q : quadrature::triangle_degree7())
      fn(q.lambda, geo.to_physical(q.lambda), q.weight * area, side);
    return;
  }
  const ClipRecord &rec = *clips.find(t);
  for (const auto &[poly, s] : {std::pair{&rec.left, Side::left},
                                std::pair{&rec.right, Side::right}}) {
    for (int k = 1; k + 1 < poly->n; ++k) {
      const TriangleGeometry sub(poly->p[0], poly->p[k], poly->p[k + 1]);
      const double area = sub.area();
      for (const auto &q : quadrature::triangle_degree7()) {
        const Point x = sub.to_physical(q.lambda);
        fn(geo.to_barycentric(x), x, q.weight * area, s);
      }
    }
  }
}

/// Calls fn(lambda, x, weight) for the Gauss points of T ∩ Λ, if any.
template <class Fn>
void for_each_line_point(const Mesh &mesh, const ClipTable &clips,
                         ElementId t, Fn &&fn) {
  const ClipRecord *rec = clips.find(t);
  if (rec == nullptr)
    return;
  const auto geo = mesh.geometry(t);
  const double len = rec->length();
  for (const auto &q : quadrature::gauss_legendre5()) {
    const Point x = rec->lower + q.t * (rec->upper - rec->lower);
    fn(geo.to_barycentric(x), x, q.weight * len);
  }
}

/// ⟨f, g⟩. Throws std::invalid_argument if g does not vanish on ∂Ω.
double apply(const SourceTerm &f, const ConformingFunction &g);
double apply(const SourceTerm &f, const ConformingFunction &g,
             const ClipTable &clips);

/// ⟨f, Ψ⟩ for every hat (by vertex id), edge bubble (by edge id) and
/// element bubble (by element id). Boundary vertices and edges get 0.
struct Loads {
  std::vector<double> vertex;
  std::vector<double> edge;
  std::vector<double> element;
};

Loads load_vectors(const SourceTerm &f, const Mesh &mesh,
                   const ClipTable &clips);

/// ∫ ∇u · ∇g with each element split along Λ.
double energy_product(const ExactSolution &u, const ConformingFunction &g);

} // namespace crlab
