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

#include "crlab/crlab.h"

#include "crlab/driver.hpp"
#include "crlab/solver.hpp"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <string>

struct crlab_mesh {
  std::shared_ptr<const crlab::Mesh> mesh;
};

struct crlab_problem {
  std::shared_ptr<const crlab::Benchmark> benchmark;
};

struct crlab_solution {
  std::shared_ptr<const crlab::Mesh> mesh;
  std::shared_ptr<const crlab::Benchmark> benchmark;
  crlab::CrFunction uh;
  int iterations = 0;
};

struct crlab_run {
  crlab::RunResult result;
};

namespace {

thread_local std::string last_error;

crlab_status fail(crlab_status status, const std::string &message) {
  last_error = message;
  return status;
}

// Translates the exception in flight into a status code.
crlab_status translate() {
  try {
    throw;
  } catch (const std::invalid_argument &e) {
    return fail(CRLAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range &e) {
    return fail(CRLAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const crlab::RefinementError &e) {
    return fail(CRLAB_ERR_REFINEMENT, e.what());
  } catch (const crlab::SolverError &e) {
    return fail(CRLAB_ERR_SOLVER, e.what());
  } catch (const crlab::OutputError &e) {
    return fail(CRLAB_ERR_IO, e.what());
  } catch (const std::bad_alloc &) {
    return fail(CRLAB_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception &e) {
    return fail(CRLAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CRLAB_ERR_INTERNAL, "unknown error");
  }
}

template <class F> crlab_status guarded(F &&f) {
  try {
    f();
    return CRLAB_OK;
  } catch (...) {
    return translate();
  }
}

crlab::Variant to_variant(crlab_variant v) {
  switch (v) {
  case CRLAB_VARIANT_CR:
    return crlab::Variant::cr;
  case CRLAB_VARIANT_CR_TILDE:
    return crlab::Variant::cr_tilde;
  }
  throw std::invalid_argument("unknown estimator variant");
}

crlab_estimate to_c(const crlab::VariantSummary &s, double err) {
  return {s.ncf, s.eta, s.osc, s.est, err, s.eff.value_or(0.0)};
}

crlab_row to_c(const crlab::RunRow &r) {
  crlab_row out{};
  out.k = r.k;
  out.n_elements = r.n_elements;
  out.n_dofs = r.n_dofs;
  out.err = r.err.value_or(0.0);
  out.has_eoc = r.eoc.has_value();
  out.eoc = r.eoc.value_or(0.0);
  out.cr = to_c(r.cr, out.err);
  out.cr_tilde = to_c(r.cr_tilde, out.err);
  out.cg_iterations = r.cg_iterations;
  out.n_marked = r.n_marked;
  out.min_h_on_line = r.min_h_on_line;
  out.median_h = r.median_h;
  out.seconds = r.seconds;
  return out;
}

void require(bool ok, const char *what) {
  if (!ok)
    throw std::invalid_argument(what);
}

crlab::Estimates estimates(const crlab_solution *s, double c1, double c2) {
  require(c1 >= 0.0 && c2 >= 0.0, "c1 and c2 must be nonnegative");
  return crlab::estimate(s->uh, s->benchmark->source, &s->benchmark->solution,
                         c1, c2);
}

} // namespace

extern "C" {

const char *crlab_version(void) { return "0.1.0"; }

const char *crlab_status_string(crlab_status status) {
  switch (status) {
  case CRLAB_OK:
    return "ok";
  case CRLAB_ERR_INVALID_ARGUMENT:
    return "invalid argument";
  case CRLAB_ERR_REFINEMENT:
    return "refinement error";
  case CRLAB_ERR_SOLVER:
    return "solver error";
  case CRLAB_ERR_IO:
    return "i/o error";
  case CRLAB_ERR_OUT_OF_MEMORY:
    return "out of memory";
  case CRLAB_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

const char *crlab_last_error(void) { return last_error.c_str(); }

crlab_status crlab_mesh_create_initial(crlab_mesh **out) {
  return guarded([&] {
    require(out, "out is null");
    *out = new crlab_mesh{
        std::make_shared<const crlab::Mesh>(crlab::unit_square_initial())};
  });
}

crlab_status crlab_mesh_refine(const crlab_mesh *mesh, const int32_t *marked,
                               size_t count, crlab_mesh **out) {
  return guarded([&] {
    require(mesh && out, "mesh or out is null");
    require(marked || count == 0, "marked is null");
    auto refined = crlab::refine(*mesh->mesh, {marked, count});
    *out = new crlab_mesh{
        std::make_shared<const crlab::Mesh>(std::move(refined))};
  });
}

crlab_status crlab_mesh_refine_uniform(const crlab_mesh *mesh,
                                       crlab_mesh **out) {
  return guarded([&] {
    require(mesh && out, "mesh or out is null");
    *out = new crlab_mesh{std::make_shared<const crlab::Mesh>(
        crlab::uniform_refine(*mesh->mesh))};
  });
}

void crlab_mesh_destroy(crlab_mesh *mesh) { delete mesh; }

size_t crlab_mesh_num_vertices(const crlab_mesh *mesh) {
  return mesh ? mesh->mesh->num_vertices() : 0;
}
size_t crlab_mesh_num_elements(const crlab_mesh *mesh) {
  return mesh ? mesh->mesh->num_elements() : 0;
}
size_t crlab_mesh_num_edges(const crlab_mesh *mesh) {
  return mesh ? mesh->mesh->num_edges() : 0;
}
size_t crlab_mesh_num_interior_edges(const crlab_mesh *mesh) {
  return mesh ? mesh->mesh->num_interior_edges() : 0;
}

crlab_status crlab_mesh_vertex(const crlab_mesh *mesh, size_t index,
                               double xy[2]) {
  return guarded([&] {
    require(mesh && xy, "mesh or xy is null");
    require(index < mesh->mesh->num_vertices(), "vertex index out of range");
    const auto &p = mesh->mesh->vertex(static_cast<crlab::VertexId>(index));
    xy[0] = p.x;
    xy[1] = p.y;
  });
}

crlab_status crlab_mesh_element(const crlab_mesh *mesh, size_t index,
                                int32_t v[3]) {
  return guarded([&] {
    require(mesh && v, "mesh or v is null");
    require(index < mesh->mesh->num_elements(), "element index out of range");
    const auto &el = mesh->mesh->element(static_cast<crlab::ElementId>(index));
    std::copy(el.v.begin(), el.v.end(), v);
  });
}

crlab_status crlab_problem_create_benchmark(double lambda,
                                            crlab_problem **out) {
  return guarded([&] {
    require(out, "out is null");
    *out = new crlab_problem{
        std::make_shared<const crlab::Benchmark>(crlab::benchmark(lambda))};
  });
}

void crlab_problem_destroy(crlab_problem *problem) { delete problem; }

crlab_status crlab_solve(const crlab_mesh *mesh, const crlab_problem *problem,
                         double tol, crlab_solution **out) {
  return guarded([&] {
    require(mesh && problem && out, "mesh, problem or out is null");
    const auto sys = crlab::assemble(*mesh->mesh, problem->benchmark->source);
    auto result = crlab::solve(sys.matrix, sys.rhs, tol);
    crlab::CrFunction uh(*mesh->mesh, std::move(result.x));
    *out = new crlab_solution{mesh->mesh, problem->benchmark, std::move(uh),
                              result.iterations};
  });
}

void crlab_solution_destroy(crlab_solution *solution) { delete solution; }

size_t crlab_solution_size(const crlab_solution *solution) {
  return solution ? solution->uh.coefficients().size() : 0;
}

int crlab_solution_iterations(const crlab_solution *solution) {
  return solution ? solution->iterations : 0;
}

crlab_status crlab_solution_coefficients(const crlab_solution *solution,
                                         double *out, size_t count) {
  return guarded([&] {
    require(solution && out, "solution or out is null");
    const auto &c = solution->uh.coefficients();
    require(count == c.size(), "count does not match the solution size");
    std::copy(c.begin(), c.end(), out);
  });
}

crlab_status crlab_solution_estimate(const crlab_solution *solution,
                                     crlab_variant variant, double c1,
                                     double c2, crlab_estimate *out) {
  return guarded([&] {
    require(solution && out, "solution or out is null");
    const auto v = to_variant(variant);
    const auto est = estimates(solution, c1, c2);
    const auto &r = est.get(v);
    *out = {r.ncf, r.eta, r.osc, r.est, r.err.value_or(0.0),
            r.effectivity.value_or(0.0)};
  });
}

crlab_status crlab_solution_indicators(const crlab_solution *solution,
                                       crlab_variant variant, double c1,
                                       double c2, double *out, size_t count) {
  return guarded([&] {
    require(solution && out, "solution or out is null");
    const auto v = to_variant(variant);
    require(count == solution->mesh->num_elements(),
            "count does not match the element count");
    const auto est = estimates(solution, c1, c2);
    const auto &t = est.get(v).total2;
    std::copy(t.begin(), t.end(), out);
  });
}

crlab_status crlab_dorfler_mark(const double *indicators_sq, size_t count,
                                double theta, int32_t *marked,
                                size_t *n_marked) {
  return guarded([&] {
    require((indicators_sq && marked) || count == 0,
            "indicators or marked is null");
    require(n_marked, "n_marked is null");
    const auto ids = crlab::dorfler_mark({indicators_sq, count}, theta);
    std::copy(ids.begin(), ids.end(), marked);
    *n_marked = ids.size();
  });
}

void crlab_config_init(crlab_config *config) {
  if (!config)
    return;
  const crlab::RunConfig d;
  *config = {};
  config->lambda = d.lambda;
  config->mode = CRLAB_MODE_UNIFORM;
  config->variant = CRLAB_VARIANT_CR;
  config->theta = d.theta;
  config->c1 = d.c1;
  config->c2 = d.c2;
  config->max_elements = d.max_elements;
  config->max_iterations = d.max_iterations;
  config->tol = d.tol;
  config->out_dir = nullptr;
  config->emit = CRLAB_EMIT_CSV;
  config->progress = nullptr;
  config->user_data = nullptr;
}

crlab_status crlab_run_execute(const crlab_config *config, crlab_run **out) {
  return guarded([&] {
    require(config && out, "config or out is null");
    require(config->mode == CRLAB_MODE_UNIFORM ||
                config->mode == CRLAB_MODE_ADAPTIVE,
            "unknown mode");
    require((config->emit & ~7u) == 0, "unknown emit flag");
    crlab::RunConfig rc;
    rc.lambda = config->lambda;
    rc.mode = config->mode == CRLAB_MODE_UNIFORM ? crlab::Mode::uniform
                                                 : crlab::Mode::adaptive;
    rc.variant = to_variant(config->variant);
    rc.theta = config->theta;
    rc.c1 = config->c1;
    rc.c2 = config->c2;
    rc.max_elements = config->max_elements;
    rc.max_iterations = config->max_iterations;
    rc.tol = config->tol;
    if (config->out_dir)
      rc.out = config->out_dir;
    rc.emit.csv = config->emit & CRLAB_EMIT_CSV;
    rc.emit.vtk = config->emit & CRLAB_EMIT_VTK;
    rc.emit.svg = config->emit & CRLAB_EMIT_SVG;

    crlab::RunObserver observer;
    if (config->progress)
      observer = [config](const crlab::RunRow &row, const crlab::Mesh &,
                          const crlab::Estimates &) {
        const crlab_row c = to_c(row);
        config->progress(&c, config->user_data);
      };
    *out = new crlab_run{crlab::run(rc, observer)};
  });
}

void crlab_run_destroy(crlab_run *run) { delete run; }

size_t crlab_run_num_rows(const crlab_run *run) {
  return run ? run->result.rows.size() : 0;
}

crlab_status crlab_run_row(const crlab_run *run, size_t index,
                           crlab_row *out) {
  return guarded([&] {
    require(run && out, "run or out is null");
    require(index < run->result.rows.size(), "row index out of range");
    *out = to_c(run->result.rows[index]);
  });
}

crlab_status crlab_run_final_mesh(const crlab_run *run, crlab_mesh **out) {
  return guarded([&] {
    require(run && out, "run or out is null");
    *out = new crlab_mesh{
        std::make_shared<const crlab::Mesh>(run->result.final_mesh)};
  });
}

} // extern "C"
