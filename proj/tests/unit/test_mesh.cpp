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

#include "../oracles.hpp"
#include "../support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

using namespace crlab;
using testing::corners;
using testing::level;

namespace {

// Refinement edge endpoints (unordered) and newest vertex, as coordinates.
using Key = std::tuple<double, double, double, double, double, double>;

Key key_of(oracle::P a, oracle::P b, oracle::P c) {
  if (std::tie(b.x, b.y) < std::tie(a.x, a.y))
    std::swap(a, b);
  return {a.x, a.y, b.x, b.y, c.x, c.y};
}

std::multiset<Key> keys(const Mesh &m) {
  std::multiset<Key> s;
  for (ElementId t = 0; t < static_cast<ElementId>(m.num_elements()); ++t) {
    const auto tri = corners(m, t);
    s.insert(key_of(tri.a, tri.b, tri.c));
  }
  return s;
}

std::multiset<Key> keys(const oracle::NvbMesh &m) {
  std::multiset<Key> s;
  for (const auto &t : m.t)
    s.insert(key_of(m.v[t[0]], m.v[t[1]], m.v[t[2]]));
  return s;
}

oracle::NvbMesh oracle_initial() {
  const auto m = unit_square_initial();
  oracle::NvbMesh o;
  for (const auto &p : m.vertices())
    o.v.push_back(testing::op(p));
  for (const auto &el : m.elements())
    o.t.push_back({el.v[0], el.v[1], el.v[2]});
  return o;
}

std::vector<int> oracle_ids(const Mesh &m, const oracle::NvbMesh &o,
                            const std::vector<ElementId> &marked) {
  std::map<Key, int> index;
  for (int i = 0; i < static_cast<int>(o.t.size()); ++i)
    index[key_of(o.v[o.t[i][0]], o.v[o.t[i][1]], o.v[o.t[i][2]])] = i;
  std::vector<int> out;
  for (ElementId t : marked) {
    const auto tri = corners(m, t);
    out.push_back(index.at(key_of(tri.a, tri.b, tri.c)));
  }
  return out;
}

double area(const Mesh &m, ElementId t) {
  const auto tri = corners(m, t);
  return 0.5 * oracle::det(tri.b - tri.a, tri.c - tri.a);
}

// Diameter over inradius, from side lengths only.
double gamma_oracle(const Mesh &m) {
  double g = 0.0;
  for (ElementId t = 0; t < static_cast<ElementId>(m.num_elements()); ++t) {
    const auto tri = corners(m, t);
    const double a = std::hypot(tri.b.x - tri.c.x, tri.b.y - tri.c.y);
    const double b = std::hypot(tri.a.x - tri.c.x, tri.a.y - tri.c.y);
    const double c = std::hypot(tri.a.x - tri.b.x, tri.a.y - tri.b.y);
    const double s = 0.5 * (a + b + c);
    const double A = std::sqrt(s * (s - a) * (s - b) * (s - c));
    g = std::max(g, std::max({a, b, c}) / (A / s));
  }
  return g;
}

bool dyadic(double x) {
  const double scaled = std::ldexp(x, 60);
  return scaled == std::floor(scaled);
}

} // namespace

TEST_CASE("initial mesh has four quarter-area triangles around the centre") {
  const auto m = unit_square_initial();
  CHECK(m.num_vertices() == 5);
  CHECK(m.num_elements() == 4);
  CHECK(m.num_edges() == 8);
  CHECK(m.num_interior_edges() == 4);
  int boundary = 0;
  for (const auto &e : m.edges())
    boundary += e.boundary();
  CHECK(boundary == 4);
  for (ElementId t = 0; t < 4; ++t) {
    CHECK(area(m, t) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.geometry(t).area() == doctest::Approx(0.25).epsilon(1e-15));
    // The refinement side is the boundary side, opposite the centre.
    CHECK(m.element(t).v[2] == 4);
    CHECK(m.edge(m.element_edges(t)[Element::refinement_edge]).boundary());
  }
  CHECK_NOTHROW(m.validate());
}

TEST_CASE("shape constant of the initial mesh matches direct geometry") {
  const auto m = unit_square_initial();
  // Right isosceles triangle with hypotenuse 1: diameter / inradius = 2 + 2√2.
  CHECK(m.shape_constant() == doctest::Approx(gamma_oracle(m)).epsilon(1e-14));
  CHECK(m.shape_constant() == doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("uniform refinement multiplies the element count by four") {
  auto m = unit_square_initial();
  double h = m.max_diameter();
  for (int k = 1; k <= 6; ++k) {
    m = uniform_refine(m);
    CHECK(m.num_elements() == (std::size_t{1} << (2 * (k + 1))));
    CHECK(m.max_diameter() == doctest::Approx(h / 2).epsilon(1e-15));
    h = m.max_diameter();
    CHECK_NOTHROW(m.validate());
  }
}

TEST_CASE("uniform refinement once gives 16 congruent triangles") {
  const auto m = uniform_refine(unit_square_initial());
  REQUIRE(m.num_elements() == 16);
  std::multiset<std::array<long, 3>> shapes;
  for (ElementId t = 0; t < 16; ++t) {
    const auto tri = corners(m, t);
    std::array<long, 3> l{
        std::lround(1e9 * std::hypot(tri.a.x - tri.b.x, tri.a.y - tri.b.y)),
        std::lround(1e9 * std::hypot(tri.b.x - tri.c.x, tri.b.y - tri.c.y)),
        std::lround(1e9 * std::hypot(tri.c.x - tri.a.x, tri.c.y - tri.a.y))};
    std::sort(l.begin(), l.end());
    shapes.insert(l);
  }
  CHECK(std::set<std::array<long, 3>>(shapes.begin(), shapes.end()).size() == 1);
}

TEST_CASE("refining nothing returns the same mesh") {
  const auto m = level(2);
  const auto r = refine(m, std::vector<ElementId>{});
  CHECK(r.num_elements() == m.num_elements());
  CHECK(r.num_vertices() == m.num_vertices());
  for (ElementId t = 0; t < static_cast<ElementId>(m.num_elements()); ++t)
    CHECK(r.element(t).v == m.element(t).v);
}

TEST_CASE("refining one initial element matches the bisection oracle") {
  const auto m = unit_square_initial();
  const std::vector<ElementId> marked{0};
  const auto r = refine(m, marked);
  const auto o = oracle_initial().refine({0});
  CHECK(r.num_elements() == o.t.size());
  // Quartered element, two neighbours bisected twice on the way to their
  // shared diagonals, and one untouched element.
  CHECK(r.num_elements() == 11);
  CHECK(keys(r) == keys(o));
  CHECK_NOTHROW(r.validate());
}

TEST_CASE("random local refinements match the bisection oracle") {
  std::mt19937_64 rng(42);
  auto m = unit_square_initial();
  auto o = oracle_initial();
  for (int step = 0; step < 12; ++step) {
    std::vector<ElementId> marked;
    std::bernoulli_distribution coin(0.15);
    for (ElementId t = 0; t < static_cast<ElementId>(m.num_elements()); ++t)
      if (coin(rng))
        marked.push_back(t);
    const auto ids = oracle_ids(m, o, marked);
    m = refine(m, marked);
    o = o.refine(ids);
    REQUIRE(keys(m) == keys(o));
    CHECK_NOTHROW(m.validate());
  }
}

TEST_CASE("vertex stars and interior fans on the initial mesh") {
  const auto m = unit_square_initial();
  const auto &pt = topology(m);
  CHECK(pt.star(4).size() == 4);
  CHECK(pt.interior_fan(4).size() == 4);
  // A corner of the square belongs to the two triangles on its sides and
  // touches one diagonal.
  for (VertexId z = 0; z < 4; ++z) {
    std::size_t count = 0;
    for (ElementId t = 0; t < 4; ++t) {
      const auto &v = m.element(t).v;
      count += std::count(v.begin(), v.end(), z);
    }
    CHECK(pt.star(z).size() == count);
    CHECK(pt.star(z).size() == 2);
    CHECK(pt.interior_fan(z).size() == 1);
    CHECK(pt.boundary_vertex[z]);
  }
  CHECK_FALSE(pt.boundary_vertex[4]);
}

TEST_CASE("star sizes sum to three times the element count") {
  for (int k : {1, 3}) {
    const auto m = level(k);
    const auto &pt = topology(m);
    std::size_t total = 0;
    for (VertexId z = 0; z < static_cast<VertexId>(m.num_vertices()); ++z)
      total += pt.star(z).size();
    CHECK(total == 3 * m.num_elements());
    if (k == 1)
      CHECK(total == 48);
  }
}

TEST_CASE("edges record incidence, local indices and orientation") {
  const auto m = testing::graded(6, 3);
  for (EdgeId e = 0; e < static_cast<EdgeId>(m.num_edges()); ++e) {
    const auto &ed = m.edge(e);
    CHECK(ed.a < ed.b);
    for (int s = 0; s < (ed.boundary() ? 1 : 2); ++s) {
      const ElementId t = ed.elements[s];
      CHECK(m.element_edges(t)[ed.local[s]] == e);
      // Local edge i is opposite vertex i.
      const auto &v = m.element(t).v;
      CHECK(v[ed.local[s]] != ed.a);
      CHECK(v[ed.local[s]] != ed.b);
    }
    const auto n = m.edge_normal(e);
    CHECK(std::hypot(n.x, n.y) == doctest::Approx(1.0).epsilon(1e-14));
    const auto c0 = m.geometry(ed.elements[0]);
    const Point g0 = (1.0 / 3.0) * (c0.vertex(0) + c0.vertex(1) + c0.vertex(2));
    const Point mid = m.edge_midpoint(e);
    // The normal points away from elements[0] (outward on the boundary).
    CHECK(dot(n, mid - g0) > 0.0);
    if (!ed.boundary())
      CHECK(ed.elements[0] < ed.elements[1]);
    else {
      const bool on_square = (mid.x == 0.0 || mid.x == 1.0 || mid.y == 0.0 || mid.y == 1.0);
      CHECK(on_square);
    }
  }
}

TEST_CASE("children partition their parents and vertices are nested") {
  std::mt19937_64 rng(5);
  auto m = level(1);
  for (int step = 0; step < 6; ++step) {
    std::vector<ElementId> marked;
    std::bernoulli_distribution coin(0.3);
    for (ElementId t = 0; t < static_cast<ElementId>(m.num_elements()); ++t)
      if (coin(rng))
        marked.push_back(t);
    const auto r = refine(m, marked);
    std::vector<double> child_area(m.num_elements(), 0.0);
    for (ElementId t = 0; t < static_cast<ElementId>(r.num_elements()); ++t) {
      REQUIRE(r.element(t).parent >= 0);
      REQUIRE(r.element(t).parent < static_cast<ElementId>(m.num_elements()));
      child_area[r.element(t).parent] += area(r, t);
    }
    for (ElementId t = 0; t < static_cast<ElementId>(m.num_elements()); ++t)
      CHECK(testing::rel(child_area[t], area(m, t)) <= 1e-14);
    REQUIRE(r.num_vertices() >= m.num_vertices());
    for (VertexId z = 0; z < static_cast<VertexId>(m.num_vertices()); ++z) {
      CHECK(r.vertex(z).x == m.vertex(z).x);
      CHECK(r.vertex(z).y == m.vertex(z).y);
    }
    // Marked elements are quartered at least.
    std::vector<int> children(m.num_elements(), 0);
    for (const auto &el : r.elements())
      ++children[el.parent];
    for (ElementId t : marked)
      CHECK(children[t] >= 4);
    m = r;
  }
}

TEST_CASE("coordinates stay dyadic and shape regularity holds") {
  const double gamma0 = unit_square_initial().shape_constant();
  for (unsigned seed = 0; seed < 4; ++seed) {
    const auto m = testing::graded(10, seed);
    for (const auto &p : m.vertices()) {
      CHECK(dyadic(p.x));
      CHECK(dyadic(p.y));
      CHECK(p.x != 2.0 / 3.0);
    }
    CHECK(m.shape_constant() <= 2.0 * gamma0);
    CHECK(m.shape_constant() == doctest::Approx(gamma_oracle(m)).epsilon(1e-12));
  }
}

TEST_CASE("invalid input is rejected") {
  const auto m = unit_square_initial();
  CHECK_THROWS_AS(refine(m, std::vector<ElementId>{7}), std::out_of_range);
  CHECK_THROWS_AS(refine(m, std::vector<ElementId>{-1}), std::out_of_range);
  // An edge with one neighbour inside the square is not a valid boundary.
  CHECK_THROWS(Mesh({{0, 0}, {1, 0}, {0, 1}}, {Element{{0, 1, 2}}}));
  // Clockwise element.
  CHECK_THROWS(Mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                    {Element{{0, 2, 1}}, Element{{0, 3, 2}}})
                   .validate());
}
