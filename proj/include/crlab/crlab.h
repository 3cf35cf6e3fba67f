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

#ifndef CRLAB_CRLAB_H
#define CRLAB_CRLAB_H

/*
 * C interface to crlab: smoothed Crouzeix-Raviart approximation of the
 * Poisson problem with a line source on the unit square, its a posteriori
 * estimators, and the uniform/adaptive refinement loop.
 *
 * Conventions:
 *   - Every fallible call returns a crlab_status; CRLAB_OK is 0.
 *   - On failure, crlab_last_error() describes the most recent error on the
 *     calling thread. The pointer stays valid until the next failing call on
 *     that thread.
 *   - Handles are opaque and owned by the caller; release them with the
 *     matching *_destroy function. Destroy functions accept NULL.
 *   - Output parameters are left untouched on failure.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CRLAB_BUILDING)
#    define CRLAB_API __declspec(dllexport)
#  else
#    define CRLAB_API __declspec(dllimport)
#  endif
#else
#  define CRLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crlab_status {
  CRLAB_OK = 0,
  CRLAB_ERR_INVALID_ARGUMENT = 1,
  CRLAB_ERR_REFINEMENT = 2,
  CRLAB_ERR_SOLVER = 3,
  CRLAB_ERR_IO = 4,
  CRLAB_ERR_OUT_OF_MEMORY = 5,
  CRLAB_ERR_INTERNAL = 6
} crlab_status;

typedef enum crlab_variant {
  CRLAB_VARIANT_CR = 0,      /* element and interior-face bubbles */
  CRLAB_VARIANT_CR_TILDE = 1 /* element bubbles only */
} crlab_variant;

typedef enum crlab_mode {
  CRLAB_MODE_UNIFORM = 0,
  CRLAB_MODE_ADAPTIVE = 1
} crlab_mode;

enum {
  CRLAB_EMIT_CSV = 1u,
  CRLAB_EMIT_VTK = 2u,
  CRLAB_EMIT_SVG = 4u
};

typedef struct crlab_mesh crlab_mesh;
typedef struct crlab_problem crlab_problem;
typedef struct crlab_solution crlab_solution;
typedef struct crlab_run crlab_run;

CRLAB_API const char *crlab_version(void);
CRLAB_API const char *crlab_status_string(crlab_status status);
/* Empty string if no call on this thread has failed yet. */
CRLAB_API const char *crlab_last_error(void);

/* ---- meshes ---------------------------------------------------------- */

/* The four triangles cut out of the unit square by its diagonals. */
CRLAB_API crlab_status crlab_mesh_create_initial(crlab_mesh **out);
/* Refines the marked elements (and whatever keeps the mesh conforming). */
CRLAB_API crlab_status crlab_mesh_refine(const crlab_mesh *mesh,
                                         const int32_t *marked, size_t count,
                                         crlab_mesh **out);
CRLAB_API crlab_status crlab_mesh_refine_uniform(const crlab_mesh *mesh,
                                                 crlab_mesh **out);
CRLAB_API void crlab_mesh_destroy(crlab_mesh *mesh);

CRLAB_API size_t crlab_mesh_num_vertices(const crlab_mesh *mesh);
CRLAB_API size_t crlab_mesh_num_elements(const crlab_mesh *mesh);
CRLAB_API size_t crlab_mesh_num_edges(const crlab_mesh *mesh);
/* Number of unknowns of the discrete problem. */
CRLAB_API size_t crlab_mesh_num_interior_edges(const crlab_mesh *mesh);
CRLAB_API crlab_status crlab_mesh_vertex(const crlab_mesh *mesh, size_t index,
                                         double xy[2]);
/* Counterclockwise vertex ids; the refinement edge is (v[0], v[1]). */
CRLAB_API crlab_status crlab_mesh_element(const crlab_mesh *mesh,
                                          size_t index, int32_t v[3]);

/* ---- problem ----------------------------------------------------------- */

/* Benchmark with a kink along x = lambda, lambda in (0, 1). */
CRLAB_API crlab_status crlab_problem_create_benchmark(double lambda,
                                                      crlab_problem **out);
CRLAB_API void crlab_problem_destroy(crlab_problem *problem);

/* ---- solve and estimate --------------------------------------------- */

/* Assembles and solves on `mesh`. The solution keeps mesh and problem
 * alive; both handles may be destroyed afterwards. */
CRLAB_API crlab_status crlab_solve(const crlab_mesh *mesh,
                                   const crlab_problem *problem, double tol,
                                   crlab_solution **out);
CRLAB_API void crlab_solution_destroy(crlab_solution *solution);

CRLAB_API size_t crlab_solution_size(const crlab_solution *solution);
CRLAB_API int crlab_solution_iterations(const crlab_solution *solution);
/* Copies the edge-midpoint values of the interior edges, count must equal
 * crlab_solution_size(). */
CRLAB_API crlab_status crlab_solution_coefficients(
    const crlab_solution *solution, double *out, size_t count);

typedef struct crlab_estimate {
  double ncf;
  double eta;
  double osc;
  double est;
  /* Exact broken energy error and est/err. */
  double err;
  double eff;
} crlab_estimate;

CRLAB_API crlab_status crlab_solution_estimate(const crlab_solution *solution,
                                               crlab_variant variant,
                                               double c1, double c2,
                                               crlab_estimate *out);
/* Squared per-element totals ncf2 + c1^2 eta2 + c2^2 osc2, count must equal
 * the element count. */
CRLAB_API crlab_status crlab_solution_indicators(
    const crlab_solution *solution, crlab_variant variant, double c1,
    double c2, double *out, size_t count);

/* Bulk marking on squared indicators. `marked` needs room for `count`
 * ids; the number written is stored in *n_marked, ids ascending. */
CRLAB_API crlab_status crlab_dorfler_mark(const double *indicators_sq,
                                          size_t count, double theta,
                                          int32_t *marked, size_t *n_marked);

/* ---- refinement loop ------------------------------------------------- */

typedef struct crlab_row {
  int k;
  size_t n_elements;
  size_t n_dofs;
  double err;
  /* 0 on the first row. */
  int has_eoc;
  double eoc;
  crlab_estimate cr;
  crlab_estimate cr_tilde;
  int cg_iterations;
  size_t n_marked;
  double min_h_on_line;
  double median_h;
  double seconds;
} crlab_row;

typedef void (*crlab_progress_fn)(const crlab_row *row, void *user_data);

typedef struct crlab_config {
  double lambda;
  crlab_mode mode;
  crlab_variant variant;
  double theta;
  double c1;
  double c2;
  size_t max_elements;
  /* Largest k solved for, negative for no limit. */
  int max_iterations;
  double tol;
  /* NULL or "" writes nothing. */
  const char *out_dir;
  /* Bitwise or of CRLAB_EMIT_*. */
  unsigned emit;
  crlab_progress_fn progress;
  void *user_data;
} crlab_config;

/* lambda 2/3, uniform, CR, theta 0.7, c1 1, c2 0.3, 65536 elements, no
 * iteration limit, tol 1e-12, no output, emit csv. */
CRLAB_API void crlab_config_init(crlab_config *config);

CRLAB_API crlab_status crlab_run_execute(const crlab_config *config,
                                         crlab_run **out);
CRLAB_API void crlab_run_destroy(crlab_run *run);
CRLAB_API size_t crlab_run_num_rows(const crlab_run *run);
CRLAB_API crlab_status crlab_run_row(const crlab_run *run, size_t index,
                                     crlab_row *out);
/* Mesh of the last row, as a new handle. */
CRLAB_API crlab_status crlab_run_final_mesh(const crlab_run *run,
                                            crlab_mesh **out);

#ifdef __cplusplus
}
#endif

#endif /* CRLAB_CRLAB_H */
