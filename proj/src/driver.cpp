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

#include "crlab/driver.hpp"

#include "crlab/solver.hpp"
#include "crlab/transfer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

namespace crlab {
namespace {

VariantSummary summarize(const EstimatorReport &r) {
  return {r.ncf, r.eta, r.osc, r.est, r.effectivity};
}

void diameters(const Mesh &mesh, double lambda, RunRow &row) {
  const auto clips = clip_to_line(mesh, lambda);
  std::vector<double> h(mesh.num_elements());
  row.min_h_on_line = 0.0;
  bool any = false;
  for (ElementId t = 0; t < static_cast<ElementId>(h.size()); ++t) {
    h[t] = mesh.geometry(t).diameter();
    if (clips.find(t)) {
      row.min_h_on_line = any ? std::min(row.min_h_on_line, h[t]) : h[t];
      any = true;
    }
  }
  const auto mid = h.begin() + static_cast<std::ptrdiff_t>(h.size() / 2);
  std::nth_element(h.begin(), mid, h.end());
  row.median_h = *mid;
}

template <class Write>
void write_file(const std::filesystem::path &path, Write &&write) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw OutputError("cannot open " + path.string() + " for writing");
  write(os);
  os.flush();
  if (!os)
    throw OutputError("failed writing " + path.string());
}

} // namespace

std::string_view to_string(Mode m) {
  return m == Mode::uniform ? "uniform" : "adaptive";
}

Mode parse_mode(std::string_view s) {
  if (s == "uniform")
    return Mode::uniform;
  if (s == "adaptive")
    return Mode::adaptive;
  throw std::invalid_argument("unknown mode '" + std::string(s) +
                              "' (expected uniform or adaptive)");
}

EmitFlags parse_emit(std::string_view s) {
  EmitFlags flags{false, false, false};
  if (s == "none")
    return flags;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = s.substr(0, comma);
    if (item == "csv")
      flags.csv = true;
    else if (item == "vtk")
      flags.vtk = true;
    else if (item == "svg")
      flags.svg = true;
    else if (!item.empty())
      throw std::invalid_argument("unknown emit flag '" + std::string(item) +
                                  "' (expected csv, vtk, svg)");
    if (comma == std::string_view::npos)
      break;
    s.remove_prefix(comma + 1);
  }
  return flags;
}

void RunConfig::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must lie in (0, 1)");
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("theta must lie in (0, 1]");
  if (!(c1 >= 0.0) || !(c2 >= 0.0) || !std::isfinite(c1) || !std::isfinite(c2))
    throw std::invalid_argument("c1 and c2 must be finite and nonnegative");
  if (!(tol > 0.0 && tol < 1.0))
    throw std::invalid_argument("solver tolerance must lie in (0, 1)");
}

std::vector<ElementId> dorfler_mark(std::span<const double> indicators_sq,
                                    double theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("theta must lie in (0, 1]");
  for (double v : indicators_sq)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("indicators must be finite and nonnegative");

  std::vector<ElementId> order(indicators_sq.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](ElementId a, ElementId b) {
    return indicators_sq[a] > indicators_sq[b];
  });
  // Sum in the marking order so that theta = 1 reaches the total exactly.
  double total = 0.0;
  for (ElementId t : order)
    total += indicators_sq[t];

  std::vector<ElementId> marked;
  const double goal = theta * total;
  double sum = 0.0;
  for (ElementId t : order) {
    if (sum >= goal || indicators_sq[t] == 0.0)
      break;
    marked.push_back(t);
    sum += indicators_sq[t];
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

RunResult run(const RunConfig &config, const RunObserver &observer) {
  config.validate();
  const bool writes = !config.out.empty() &&
                      (config.emit.csv || config.emit.vtk || config.emit.svg);
  if (writes) {
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec)
      throw OutputError("cannot create output directory " +
                        config.out.string() + ": " + ec.message());
  }

  const auto bm = benchmark(config.lambda);
  RunResult result{config, {}, unit_square_initial()};
  Mesh &mesh = result.final_mesh;
  std::vector<double> guess;

  for (int k = 0;; ++k) {
    const auto start = std::chrono::steady_clock::now();
    const auto sys = assemble(mesh, bm.source);
    SolveResult sol;
    try {
      sol = solve(sys.matrix, sys.rhs, config.tol, guess);
    } catch (const SolverError &e) {
      throw SolverError("step k=" + std::to_string(k) + ": " + e.what());
    }
    const CrFunction uh(mesh, std::move(sol.x));
    const auto est = estimate(uh, bm.source, &bm.solution, config.c1, config.c2);

    RunRow row;
    row.k = k;
    row.n_elements = mesh.num_elements();
    row.n_dofs = mesh.num_interior_edges();
    row.cg_iterations = sol.iterations;
    if (est.error)
      row.err = est.error->global;
    if (!result.rows.empty() && row.err && result.rows.back().err)
      row.eoc = eoc(*result.rows.back().err, result.rows.back().n_elements,
                    *row.err, row.n_elements);
    row.cr = summarize(est.cr);
    row.cr_tilde = summarize(est.cr_tilde);
    diameters(mesh, config.lambda, row);

    const auto &report = est.get(config.variant);
    if (writes && config.emit.vtk)
      write_file(config.out / ("mesh_" + std::to_string(k) + ".vtk"),
                 [&](std::ostream &os) { write_vtk(os, mesh, report); });

    std::vector<ElementId> marked;
    const bool last =
        config.max_iterations >= 0 && k >= config.max_iterations;
    if (!last) {
      if (config.mode == Mode::uniform) {
        marked.resize(mesh.num_elements());
        std::iota(marked.begin(), marked.end(), 0);
      } else {
        marked = dorfler_mark(report.total2, config.theta);
      }
    }
    std::optional<Mesh> next;
    if (!marked.empty()) {
      next = refine(mesh, marked);
      if (next->num_elements() > config.max_elements)
        next.reset();
    }
    row.n_marked = next ? marked.size() : 0;
    row.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    result.rows.push_back(row);
    if (observer)
      observer(row, mesh, est);
    if (writes && config.emit.csv)
      write_file(config.out / "table.csv", [&](std::ostream &os) {
        write_csv(os, result.rows, config.variant);
      });
    if (!next)
      break;

    guess = prolongate_cr(uh, *next).coefficients();
    mesh = std::move(*next);
  }

  if (writes && config.emit.svg)
    write_file(config.out / "convergence.svg", [&](std::ostream &os) {
      write_svg(os, result.rows, config.variant);
    });
  return result;
}

} // namespace crlab
