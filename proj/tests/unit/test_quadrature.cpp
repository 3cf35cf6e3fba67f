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

#include "crlab/geometry.hpp"
#include "crlab/quadrature.hpp"

#include "../oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace crlab;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Mean of λ0^a λ1^b λ2^c over a triangle.
double moment(int a, int b, int c) {
  return 2.0 * factorial(a) * factorial(b) * factorial(c) /
         factorial(a + b + c + 2);
}

double rule_moment(int a, int b, int c) {
  double s = 0.0;
  for (const auto &q : quadrature::triangle_degree7())
    s += q.weight * std::pow(q.lambda[0], a) * std::pow(q.lambda[1], b) *
         std::pow(q.lambda[2], c);
  return s;
}

} // namespace

TEST_CASE("triangle rule integrates every monomial up to degree 7") {
  const auto rule = quadrature::triangle_degree7();
  CHECK(rule.size() == 13);
  double wsum = 0.0;
  for (const auto &q : rule) {
    wsum += q.weight;
    CHECK(q.lambda[0] + q.lambda[1] + q.lambda[2] == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
  for (int a = 0; a <= 7; ++a)
    for (int b = 0; a + b <= 7; ++b)
      for (int c = 0; a + b + c <= 7; ++c)
        CHECK(std::abs(rule_moment(a, b, c) - moment(a, b, c)) <=
              1e-14 * moment(a, b, c));
}

TEST_CASE("triangle rule is not exact beyond degree 7") {
  double worst = 0.0;
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; a + b <= 8; ++b) {
      const int c = 8 - a - b;
      worst = std::max(worst, std::abs(rule_moment(a, b, c) - moment(a, b, c)) /
                                  moment(a, b, c));
    }
  CHECK(worst > 1e-6);
}

TEST_CASE("Gauss rule integrates powers up to degree 9") {
  const auto rule = quadrature::gauss_legendre5();
  CHECK(rule.size() == 5);
  for (int k = 0; k <= 10; ++k) {
    double s = 0.0;
    for (const auto &q : rule)
      s += q.weight * std::pow(q.t, k);
    if (k <= 9)
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-15));
    else
      CHECK(std::abs(s - 1.0 / (k + 1)) > 1e-9);
  }
}

TEST_CASE("triangle geometry agrees with the Cramer-rule oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    if (cross(b - a, c - a) < 0.0)
      std::swap(b, c);
    const TriangleGeometry geo(a, b, c);
    const oracle::P oa{a.x, a.y}, ob{b.x, b.y}, oc{c.x, c.y};
    CHECK(geo.area() == doctest::Approx(0.5 * oracle::det(ob - oa, oc - oa)).epsilon(1e-13));
    const auto g = oracle::bary_grad(oa, ob, oc);
    for (int k = 0; k < 3; ++k) {
      CHECK(geo.grad_lambda(k).x == doctest::Approx(g[k].x).epsilon(1e-9));
      CHECK(geo.grad_lambda(k).y == doctest::Approx(g[k].y).epsilon(1e-9));
    }
    const Point x{u(rng), u(rng)};
    const auto l = geo.to_barycentric(x);
    const auto lo = oracle::bary(oa, ob, oc, {x.x, x.y});
    for (int k = 0; k < 3; ++k)
      CHECK(l[k] == doctest::Approx(lo[k]).epsilon(1e-10));
    const Point back = geo.to_physical(l);
    CHECK(back.x == doctest::Approx(x.x).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(x.y).epsilon(1e-12));
  }
}

TEST_CASE("inradius and diameter of the unit right triangle") {
  const TriangleGeometry geo({0, 0}, {1, 0}, {0, 1});
  CHECK(geo.diameter() == doctest::Approx(std::sqrt(2.0)));
  CHECK(geo.perimeter() == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK(geo.inradius() == doctest::Approx(1.0 / (2.0 + std::sqrt(2.0))));
}
