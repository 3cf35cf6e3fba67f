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
#include "crlab/solver.hpp"
#include "crlab/transfer.hpp"

#include "../checks.hpp"
#include "../oracles.hpp"
#include "../support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace crlab;
using testing::corners;
using testing::level;

namespace {

double total(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0); }

ExactSolution smooth_fixture() {
  auto branch = [](const Point &p) {
    const double wx = p.x * (1 - p.x), wy = p.y * (1 - p.y);
    return ValueGrad{wx * wy, {(1 - 2 * p.x) * wy, wx * (1 - 2 * p.y)}};
  };
  return ExactSolution(0.5, branch, branch);
}

const SourceTerm &zero_source() {
  static const SourceTerm f(0.5, Polynomial2::constant(0.0), Polynomial2::constant(0.0));
  return f;
}

// ∥∇_h(Ψ_F - A Ψ_F)∥² per element with the averages built from one-sided
// vertex traces of the midpoint oracle.
std::vector<double> ncf_basis_oracle(const Mesh &m, EdgeId f) {
  auto trace = [&](ElementId t, VertexId z) {
    const auto tri = corners(m, t);
    std::array<double, 3> mids{};
    for (int i = 0; i < 3; ++i)
      mids[i] = m.element_edges(t)[i] == f ? 1.0 : 0.0;
    return oracle::cr_value(tri.a, tri.b, tri.c, mids, testing::op(m.vertex(z)));
  };
  std::vector<double> avg(m.num_vertices(), 0.0);
  for (VertexId z = 0; z < static_cast<VertexId>(m.num_vertices()); ++z) {
    if (m.is_boundary_vertex(z))
      continue;
    const auto &star = m.topology().star(z);
    for (ElementId t : star)
      avg[z] += trace(t, z);
    avg[z] /= static_cast<double>(star.size());
  }
  std::vector<double> out(m.num_elements());
  for (ElementId t = 0; t < static_cast<ElementId>(m.num_elements()); ++t) {
    const auto tri = corners(m, t);
    const auto g = oracle::bary_grad(tri.a, tri.b, tri.c);
    oracle::P d{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      const VertexId z = m.element(t).v[i];
      d = d + (trace(t, z) - avg[z]) * g[i];
    }
    out[t] = (d.x * d.x + d.y * d.y) * 0.5 * std::abs(oracle::det(tri.b - tri.a, tri.c - tri.a));
  }
  return out;
}

// Residual of u_h tested with a conforming function, by the oracle.
double residual(const CrFunction &uh, const SourceTerm &f, const ConformingFunction &b) {
  const auto &m = uh.mesh();
  auto gu = [&](ElementId t, const Bary &) { return uh.gradient(t); };
  auto gb = [&](ElementId t, const Bary &l) { return eval_conforming(b, t, l).grad; };
  return apply(f, b) - checks::broken_product(m, gu, gb);
}

double inner(const ConformingFunction &a, const ConformingFunction &b) {
  auto ga = [&](ElementId t, const Bary &l) { return eval_conforming(a, t, l).grad; };
  auto gb = [&](ElementId t, const Bary &l) { return eval_conforming(b, t, l).grad; };
  return checks::broken_product(a.mesh(), ga, gb);
}

// g_zᵀ A_z⁻¹ g_z for the bubbles around z, by Gaussian elimination.
double patch_oracle(const CrFunction &uh, const SourceTerm &f, VertexId z) {
  const auto &m = uh.mesh();
  std::vector<ConformingFunction> bubbles;
  for (ElementId t : m.topology().star(z))
    bubbles.push_back(ConformingFunction::element_bubble(m, t));
  for (EdgeId e = 0; e < static_cast<EdgeId>(m.num_edges()); ++e) {
    const auto &ed = m.edge(e);
    if (!ed.boundary() && (ed.a == z || ed.b == z))
      bubbles.push_back(ConformingFunction::edge_bubble(m, e));
  }
  const std::size_t n = bubbles.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = residual(uh, f, bubbles[i]);
    a[i][n] = g[i];
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = inner(bubbles[i], bubbles[j]);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i < n; ++i) {
      const double s = a[i][k] / a[k][k];
      for (std::size_t j = k; j <= n; ++j)
        a[i][j] -= s * a[k][j];
    }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = a[i][n];
    for (std::size_t j = i + 1; j < n; ++j)
      s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return std::inner_product(g.begin(), g.end(), x.begin(), 0.0);
}

} // namespace

TEST_CASE("averaging nonconformity vanishes for continuous piecewise linears") {
  std::mt19937_64 rng(3);
  for (const auto &m : {level(2), testing::graded(8, 4)}) {
    const auto v = testing::random_p1(m, rng);
    const auto avg = ncf_avg(v);
    const auto jump = ncf_jump(v);
    for (std::size_t t = 0; t < avg.size(); ++t) {
      CHECK(avg[t] <= 1e-28);
      CHECK(jump[t] <= 1e-28);
    }
  }
}

TEST_CASE("averaging nonconformity of a basis function matches the oracle") {
  for (const auto &m : {level(0), level(2), testing::graded(6, 2)}) {
    for (std::size_t i = 0; i < m.num_interior_edges(); i += 3) {
      const EdgeId f = m.topology().dof_to_edge[i];
      const auto lib = ncf_avg(CrFunction::basis(m, f));
      const auto ref = ncf_basis_oracle(m, f);
      for (std::size_t t = 0; t < lib.size(); ++t)
        CHECK(lib[t] == doctest::Approx(ref[t]).epsilon(1e-12).scale(1e-14));
    }
  }
}

TEST_CASE("jump nonconformity of a basis function") {
  // Across each of the four other sides of the edge patch the jump runs
  // linearly from 1 to -1, so ∫|⟦v⟧|²/h_F = 1/3 there and 0 on F itself.
  for (const auto &m : {level(1), testing::graded(7, 5)}) {
    for (std::size_t i = 0; i < m.num_interior_edges(); ++i) {
      const auto j = ncf_jump(CrFunction::basis(m, m.topology().dof_to_edge[i]));
      CHECK(total(j) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
      // Scaling by a multiplies every contribution by a².
      auto v = CrFunction::basis(m, m.topology().dof_to_edge[i]);
      for (auto &c : v.coefficients())
        c *= 3.0;
      CHECK(total(ncf_jump(v)) == doctest::Approx(12.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("averaging and jump nonconformity are equivalent") {
  std::mt19937_64 rng(5);
  double lo = INFINITY, hi = 0.0;
  for (const auto &m : {level(1), level(3), testing::graded(10, 6)})
    for (int s = 0; s < 20; ++s) {
      const auto v = testing::random_cr(m, rng);
      const double ratio = total(ncf_avg(v)) / total(ncf_jump(v));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  CHECK(lo >= 1.0 / 50);
  CHECK(hi <= 50.0);
}

TEST_CASE("nonconformity is quadratic and unchanged by adding P1 functions") {
  std::mt19937_64 rng(7);
  const auto m = testing::graded(6, 7);
  const auto v = testing::random_cr(m, rng);
  const auto p = testing::random_p1(m, rng);
  CrFunction twice(m), shifted(m);
  for (std::size_t i = 0; i < v.coefficients().size(); ++i) {
    twice.coefficients()[i] = 2 * v.coefficients()[i];
    shifted.coefficients()[i] = v.coefficients()[i] + p.coefficients()[i];
  }
  const auto ref = ncf_avg(v), a = ncf_avg(twice), b = ncf_avg(shifted);
  CHECK(total(ref) > 0.0);
  for (std::size_t t = 0; t < ref.size(); ++t) {
    CHECK(a[t] == doctest::Approx(4 * ref[t]).epsilon(1e-12).scale(1e-16));
    CHECK(b[t] == doctest::Approx(ref[t]).epsilon(1e-10).scale(1e-16));
  }
}

TEST_CASE("indicators vanish without data") {
  const auto m = level(2);
  const CrFunction zero(m);
  for (double x : eta_cr(zero, zero_source()))
    CHECK(x == 0.0);
  for (double x : eta_crtilde(zero, zero_source()))
    CHECK(x == 0.0);
  for (double x : surrogate_osc(zero_source(), m))
    CHECK(x == 0.0);
  CHECK(patch_residual_norm(zero, zero_source(), 4) == 0.0);
}

TEST_CASE("the element-bubble indicator only sees the load") {
  const auto bm = benchmark(2.0 / 3.0);
  for (const auto &m : {level(2), testing::graded(8, 9)}) {
    const auto uh = solve_problem(m, bm.source);
    const auto clips = clip_to_line(m, bm.source.lambda());
    const auto loads = load_vectors(bm.source, m, clips);
    const auto tilde = eta_crtilde(uh, bm.source);
    const auto cr = eta_cr(uh, bm.source);
    for (ElementId t = 0; t < static_cast<ElementId>(m.num_elements()); ++t) {
      const double expect = std::abs(loads.element[t]) / element_bubble_energy(m, t);
      CHECK(std::abs(tilde[t] - expect) <= 1e-13 * (1.0 + expect));
      CHECK(tilde[t] <= cr[t] + 1e-15);
    }
  }
}

TEST_CASE("the face-bubble indicator matches the oracle") {
  std::mt19937_64 rng(10);
  const auto bm = benchmark(2.0 / 3.0);
  const auto m = level(2);
  const auto uh = testing::random_cr(m, rng);
  const auto cr = eta_cr(uh, bm.source);
  for (ElementId t = 0; t < static_cast<ElementId>(m.num_elements()); ++t) {
    const auto eb = ConformingFunction::element_bubble(m, t);
    double best = std::abs(residual(uh, bm.source, eb)) / std::sqrt(inner(eb, eb));
    for (EdgeId e : m.element_edges(t)) {
      if (m.edge(e).boundary())
        continue;
      const auto fb = ConformingFunction::edge_bubble(m, e);
      best = std::max(best, std::abs(residual(uh, bm.source, fb)) / std::sqrt(inner(fb, fb)));
    }
    CHECK(cr[t] == doctest::Approx(best).epsilon(1e-10));
  }
}

TEST_CASE("patch residual at a corner matches a 3x3 oracle") {
  std::mt19937_64 rng(11);
  const auto bm = benchmark(2.0 / 3.0);
  const auto m = level(2);
  const auto uh = testing::random_cr(m, rng);
  // Vertex 0 is the corner (0, 0): two elements and one interior side.
  REQUIRE(m.topology().star(0).size() == 2);
  const double lib = patch_residual_norm(uh, bm.source, 0);
  CHECK(lib > 0.0);
  CHECK(lib == doctest::Approx(patch_oracle(uh, bm.source, 0)).epsilon(1e-10));
  // And at an interior vertex.
  CHECK(patch_residual_norm(uh, bm.source, 4) ==
        doctest::Approx(patch_oracle(uh, bm.source, 4)).epsilon(1e-10));
}

TEST_CASE("patch residuals are equivalent to the face-bubble indicator") {
  const auto bm = benchmark(2.0 / 3.0);
  for (const auto &m : {level(2), level(4), testing::graded(12, 3)}) {
    const auto uh = solve_problem(m, bm.source);
    const auto clips = clip_to_line(m, bm.source.lambda());
    const auto loads = load_vectors(bm.source, m, clips);
    const double patch = total(patch_residual_per_element(uh, loads));
    double eta2 = 0.0;
    for (double x : eta_cr(uh, loads))
      eta2 += x * x;
    CHECK(patch / eta2 >= 1.0 / 100);
    CHECK(patch / eta2 <= 100.0);
  }
}

TEST_CASE("surrogate oscillation") {
  SUBCASE("vanishes for a constant density") {
    const auto f = SourceTerm::density(Polynomial2::constant(3.0));
    for (double x : surrogate_osc(f, level(3)))
      CHECK(x <= 1e-28);
  }
  SUBCASE("agrees with the oracle") {
    const auto r = checks::oracle_osc(5);
    CHECK(r.pass());
  }
  SUBCASE("the line part is h_T² max|w|²") {
    const SourceTerm f(2.0 / 3.0, Polynomial2::constant(0.0), Polynomial2::constant(0.0),
                       LineWeight{{0.0, -1.0, 1.0}});
    const auto osc = surrogate_osc(f, unit_square_initial());
    // The east triangle meets x = 2/3 for y in [1/3, 2/3] where |w| peaks
    // at 1/4; its diameter is 1.
    CHECK(osc[1] == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    // The south one meets it for y in [0, 1/3]: max |w| = 2/9.
    CHECK(osc[0] == doctest::Approx(4.0 / 81.0).epsilon(1e-14));
    CHECK(osc[3] == 0.0);
  }
}

TEST_CASE("exact error of the zero function is the energy of u") {
  const auto m = level(3);
  const CrFunction zero(m);
  CHECK(exact_error(zero, smooth_fixture()).global ==
        doctest::Approx(std::sqrt(1.0 / 45.0)).epsilon(1e-13));
  CHECK(exact_error(zero, benchmark(2.0 / 3.0).solution).global ==
        doctest::Approx(std::sqrt(19.0 / 3645.0)).epsilon(1e-13));
}

TEST_CASE("exact error agrees with the split-quadrature oracle") {
  const auto bm = benchmark(2.0 / 3.0);
  for (const auto &m : {level(1), testing::graded(9, 4)}) {
    const auto uh = solve_problem(m, bm.source);
    const auto lib = exact_error(uh, bm.solution);
    const auto ref = checks::local_errors(uh, 2.0 / 3.0);
    for (std::size_t t = 0; t < ref.size(); ++t)
      CHECK(lib.per_element[t] == doctest::Approx(ref[t]).epsilon(1e-11).scale(1e-20));
  }
}

TEST_CASE("initial error of the benchmark") {
  const auto bm = benchmark(2.0 / 3.0);
  const auto m = unit_square_initial();
  const auto uh = solve_problem(m, bm.source);
  CHECK(exact_error(uh, bm.solution).global == doctest::Approx(6.55e-2).epsilon(0.02));
}

TEST_CASE("combining estimator parts") {
  SUBCASE("zero parts have no effectivity") {
    const auto r = combine({{0, 0}, {0, 0}, {0, 0}}, 1.0, 0.3, Variant::cr);
    CHECK(r.est == 0.0);
    CHECK_FALSE(r.effectivity.has_value());
    CHECK_FALSE(combine({{0}, {0}, {0}}, 1.0, 0.3, Variant::cr, 0.0).effectivity.has_value());
  }
  SUBCASE("weights") {
    const auto r = combine({{1, 3}, {4, 0}, {0, 100}}, 2.0, 0.5, Variant::cr_tilde, 5.0);
    CHECK(r.total2[0] == doctest::Approx(1 + 16));
    CHECK(r.total2[1] == doctest::Approx(3 + 25));
    CHECK(r.ncf == doctest::Approx(2.0));
    CHECK(r.eta == doctest::Approx(2.0));
    CHECK(r.osc == doctest::Approx(10.0));
    CHECK(r.est == doctest::Approx(std::sqrt(4 + 4 * 4 + 0.25 * 100)));
    CHECK(*r.effectivity == doctest::Approx(r.est / 5.0));
  }
  SUBCASE("mismatched sizes") {
    CHECK_THROWS_AS(combine({{1, 2}, {1}, {1, 2}}, 1.0, 0.3, Variant::cr), std::invalid_argument);
  }
}

TEST_CASE("convergence order from two uniform levels") {
  CHECK(eoc(4.53e-3, 262144, 3.20e-3, 1048576) == doctest::Approx(0.25).epsilon(0.01));
  CHECK(eoc(1.0, 4, 0.5, 16) == doctest::Approx(0.5));
}

TEST_CASE("variant names") {
  CHECK(parse_variant("cr") == Variant::cr);
  CHECK(parse_variant("crtilde") == Variant::cr_tilde);
  CHECK(parse_variant("cr-tilde") == Variant::cr_tilde);
  CHECK(to_string(Variant::cr_tilde) == "crtilde");
  CHECK_THROWS_AS(parse_variant("p2"), std::invalid_argument);
}

TEST_CASE("effectivity on uniform meshes") {
  const auto bm = benchmark(2.0 / 3.0);
  auto m = level(2);
  for (int k = 2; k <= 4; ++k, m = uniform_refine(m)) {
    const auto uh = solve_problem(m, bm.source);
    const auto e = estimate(uh, bm.source, &bm.solution);
    REQUIRE(e.error.has_value());
    for (const auto *r : {&e.cr, &e.cr_tilde}) {
      REQUIRE(r->effectivity.has_value());
      CHECK(*r->effectivity >= 1.5);
      CHECK(*r->effectivity <= 2.2);
    }
    CHECK(e.cr_tilde.est <= e.cr.est);
  }
}

TEST_CASE("indicator bounds against the local error") {
  const auto r = checks::indicator_bounds({level(1), level(3), testing::graded(8, 2)});
  CHECK(r.pass());
}
