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

// Command line front end: runs the uniform or adaptive refinement loop for
// the line-source benchmark and writes table.csv, mesh_k.vtk and
// convergence.svg.

#include "crlab/crlab.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

void print_row(const crlab_row *row, void *user_data) {
  const auto variant = *static_cast<const crlab_variant *>(user_data);
  const crlab_estimate &e =
      variant == CRLAB_VARIANT_CR ? row->cr : row->cr_tilde;
  if (row->k == 0)
    std::printf("%3s %9s %12s %7s %12s %6s %6s %9s\n", "k", "#T", "err",
                "eoc", "est", "eff", "cg", "time");
  char eoc[32] = "";
  if (row->has_eoc)
    std::snprintf(eoc, sizeof eoc, "%.3f", row->eoc);
  std::printf("%3d %9zu %12.5e %7s %12.5e %6.3f %6d %8.2fs\n", row->k,
              row->n_elements, row->err, eoc, e.est, e.eff,
              row->cg_iterations, row->seconds);
  std::fflush(stdout);
}

unsigned parse_emit(const std::string &s) {
  unsigned flags = 0;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto item = s.substr(pos, comma == std::string::npos
                                        ? std::string::npos
                                        : comma - pos);
    if (item == "csv")
      flags |= CRLAB_EMIT_CSV;
    else if (item == "vtk")
      flags |= CRLAB_EMIT_VTK;
    else if (item == "svg")
      flags |= CRLAB_EMIT_SVG;
    else if (item != "none" && !item.empty())
      throw CLI::ValidationError("--emit",
                                 "unknown item '" + item +
                                     "' (expected csv, vtk, svg or none)");
    if (comma == std::string::npos)
      break;
    pos = comma + 1;
  }
  return flags;
}

} // namespace

int main(int argc, char **argv) {
  crlab_config config;
  crlab_config_init(&config);

  CLI::App app{"Smoothed Crouzeix-Raviart solver with strictly equivalent "
               "a posteriori estimators"};
  std::string mode = "uniform", estimator = "cr", emit = "csv,svg", out = "out";
  bool quiet = false;

  app.add_option("--lambda", config.lambda, "Position of the line x = lambda")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--mode", mode, "Refinement mode")
      ->check(CLI::IsMember({"uniform", "adaptive"}))
      ->capture_default_str();
  app.add_option("--estimator", estimator,
                 "Estimator variant (also drives adaptive marking)")
      ->check(CLI::IsMember({"cr", "crtilde"}))
      ->capture_default_str();
  app.add_option("--theta", config.theta, "Doerfler bulk parameter in (0, 1]")
      ->capture_default_str();
  app.add_option("--c1", config.c1, "Weight of the residual indicator")
      ->capture_default_str();
  app.add_option("--c2", config.c2, "Weight of the oscillation surrogate")
      ->capture_default_str();
  app.add_option("--max-elements", config.max_elements,
                 "Largest mesh to solve on")
      ->capture_default_str();
  app.add_option("--max-iterations", config.max_iterations,
                 "Largest step index k, negative for no limit")
      ->capture_default_str();
  app.add_option("--tol", config.tol, "Relative residual tolerance of CG")
      ->capture_default_str();
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--emit", emit, "Comma separated subset of csv,vtk,svg")
      ->capture_default_str();
  app.add_flag("-q,--quiet", quiet, "Do not print the table");

  try {
    app.parse(argc, argv);
    config.emit = parse_emit(emit);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  config.mode = mode == "uniform" ? CRLAB_MODE_UNIFORM : CRLAB_MODE_ADAPTIVE;
  crlab_variant variant =
      estimator == "cr" ? CRLAB_VARIANT_CR : CRLAB_VARIANT_CR_TILDE;
  config.variant = variant;
  config.out_dir = out.c_str();
  if (!quiet) {
    config.progress = print_row;
    config.user_data = &variant;
  }

  crlab_run *run = nullptr;
  const crlab_status status = crlab_run_execute(&config, &run);
  if (status != CRLAB_OK) {
    std::fprintf(stderr, "crlab: %s: %s\n", crlab_status_string(status),
                 crlab_last_error());
    return 1;
  }
  crlab_run_destroy(run);
  return 0;
}
