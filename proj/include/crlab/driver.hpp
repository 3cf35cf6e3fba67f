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

#include "crlab/estimator.hpp"
#include "crlab/mesh.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crlab {

/// File or directory could not be written.
class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Mode { uniform, adaptive };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);

struct EmitFlags {
  bool csv = true;
  bool vtk = false;
  bool svg = false;
};

/// Parses a comma separated subset of {csv, vtk, svg}; "none" or "" clears.
EmitFlags parse_emit(std::string_view s);

struct RunConfig {
  double lambda = 2.0 / 3.0;
  Mode mode = Mode::uniform;
  Variant variant = Variant::cr;
  double theta = 0.7;
  double c1 = kDefaultC1;
  double c2 = kDefaultC2;
  /// No mesh with more elements is solved on.
  std::size_t max_elements = 65536;
  /// Largest k solved for, negative for no limit.
  int max_iterations = -1;
  double tol = 1e-12;
  /// Empty: nothing is written regardless of the emit flags.
  std::filesystem::path out;
  EmitFlags emit;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct VariantSummary {
  double ncf = 0.0;
  double eta = 0.0;
  double osc = 0.0;
  double est = 0.0;
  std::optional<double> eff;
};

/// One SOLVE/ESTIMATE step of the loop.
struct RunRow {
  int k = 0;
  std::size_t n_elements = 0;
  std::size_t n_dofs = 0;
  std::optional<double> err;
  std::optional<double> eoc;
  VariantSummary cr;
  VariantSummary cr_tilde;
  int cg_iterations = 0;
  /// Elements marked for the next step; 0 on the last row.
  std::size_t n_marked = 0;
  /// Smallest diameter among elements meeting the line, and the median
  /// diameter over the mesh.
  double min_h_on_line = 0.0;
  double median_h = 0.0;
  double seconds = 0.0;

  const VariantSummary &get(Variant v) const {
    return v == Variant::cr ? cr : cr_tilde;
  }
};

struct RunResult {
  RunConfig config;
  std::vector<RunRow> rows;
  Mesh final_mesh;
};

/// Called after every ESTIMATE step with the row, its mesh, and the full
/// per-element estimates.
using RunObserver =
    std::function<void(const RunRow &, const Mesh &, const Estimates &)>;

/// Greedy bulk marking: largest squared indicators first (ties by id) until
/// the marked sum reaches theta times the total. Result is sorted by id.
/// Zero indicators are never marked. Throws std::invalid_argument on a
/// negative or non-finite value, or theta outside (0, 1].
std::vector<ElementId> dorfler_mark(std::span<const double> indicators_sq,
                                    double theta);

/// SOLVE, ESTIMATE, MARK, REFINE until the next mesh would exceed
/// max_elements or k reaches max_iterations. Solver failures are rethrown
/// as SolverError naming the step; file errors as OutputError.
RunResult run(const RunConfig &config, const RunObserver &observer = {});

/// table.csv for one variant: k,n_elements,err,eoc,est,eff,ncf,eta,osc.
void write_csv(std::ostream &os, std::span<const RunRow> rows, Variant v);

/// Legacy ASCII unstructured grid with the squared indicators of one
/// variant as cell data (ncf2, eta2, osc2, total2).
void write_vtk(std::ostream &os, const Mesh &mesh,
               const EstimatorReport &report);

/// Log-log plot of err and est against the element count with a slope
/// -1/2 guide.
void write_svg(std::ostream &os, std::span<const RunRow> rows, Variant v);

/// 6 significant digits, scientific, locale independent.
std::string format_number(double x);

} // namespace crlab
