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

#include "crlab/solver.hpp"

#include "crlab/transfer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace crlab {

SparseSpd::SparseSpd(std::size_t n, std::vector<std::int32_t> row_ptr,
                     std::vector<std::int32_t> cols, std::vector<double> values)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)),
      values_(std::move(values)) {
  if (row_ptr_.size() != n_ + 1 || cols_.size() != values_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != cols_.size())
    throw std::invalid_argument("inconsistent CSR arrays");
}

double SparseSpd::operator()(std::size_t i, std::size_t j) const {
  for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
    if (static_cast<std::size_t>(cols_[k]) == j)
      return values_[k];
  return 0.0;
}

std::vector<double> SparseSpd::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    d[i] = (*this)(i, i);
  return d;
}

void SparseSpd::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      s += values_[k] * x[cols_[k]];
    y[i] = s;
  }
}

std::vector<double> SparseSpd::operator*(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

std::array<std::array<double, 3>, 3> local_stiffness(const Mesh &mesh,
                                                     ElementId t) {
  // Ψ_i = 1 - 2λ_i on t.
  const auto geo = mesh.geometry(t);
  std::array<std::array<double, 3>, 3> k{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      k[i][j] = 4.0 * geo.area() * dot(geo.grad_lambda(i), geo.grad_lambda(j));
  return k;
}

SparseSpd assemble_stiffness(const Mesh &mesh) {
  const auto &pt = mesh.topology();
  const std::size_t n = mesh.num_interior_edges();

  // A row couples an edge with the other sides of its (at most two)
  // elements: at most five entries, diagonal first.
  std::vector<std::int32_t> row_ptr(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &ed = mesh.edge(pt.dof_to_edge[i]);
    std::int32_t count = 1;
    for (ElementId t : ed.elements)
      for (EdgeId e : mesh.element_edges(t))
        if (e != pt.dof_to_edge[i] && pt.edge_to_dof[e] != kNone)
          ++count;
    row_ptr[i + 1] = row_ptr[i] + count;
  }
  std::vector<std::int32_t> cols(row_ptr.back(), kNone);
  std::vector<double> values(row_ptr.back(), 0.0);
  std::vector<std::int32_t> fill(row_ptr.begin(), row_ptr.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    cols[fill[i]++] = static_cast<std::int32_t>(i);

  for (ElementId t = 0; t < static_cast<ElementId>(mesh.num_elements()); ++t) {
    const auto local = local_stiffness(mesh, t);
    const auto &ee = mesh.element_edges(t);
    std::array<std::int32_t, 3> dof{};
    for (int i = 0; i < 3; ++i)
      dof[i] = pt.edge_to_dof[ee[i]];
    for (int i = 0; i < 3; ++i) {
      if (dof[i] == kNone)
        continue;
      for (int j = 0; j < 3; ++j) {
        if (dof[j] == kNone)
          continue;
        const double a = local[i][j];
        if (i == j) {
          values[row_ptr[dof[i]]] += a;
          continue;
        }
        // Two elements share only one side, so (i, j) is met once.
        cols[fill[dof[i]]] = dof[j];
        values[fill[dof[i]]++] = a;
      }
    }
  }
  return {n, std::move(row_ptr), std::move(cols), std::move(values)};
}

std::vector<double> assemble_rhs(const Mesh &mesh, const Loads &loads) {
  return smooth_ecr_transpose(mesh, loads.vertex, loads.edge);
}

std::vector<double> assemble_rhs(const Mesh &mesh, const SourceTerm &f) {
  return assemble_rhs(mesh,
                      load_vectors(f, mesh, clip_to_line(mesh, f.lambda())));
}

LinearSystem assemble(const Mesh &mesh, const SourceTerm &f) {
  return {assemble_stiffness(mesh), assemble_rhs(mesh, f)};
}

SolveResult solve(const SparseSpd &a, std::span<const double> b, double tol,
                  std::span<const double> initial_guess, int max_iterations) {
  if (!(tol > 0.0))
    throw std::invalid_argument("solver tolerance must be positive");
  const std::size_t n = a.size();
  if (b.size() != n || (!initial_guess.empty() && initial_guess.size() != n))
    throw std::invalid_argument("right-hand side does not match the matrix");
  if (max_iterations <= 0)
    max_iterations = static_cast<int>(std::max<std::size_t>(1000, 10 * n));

  auto dotp = [](std::span<const double> x, std::span<const double> y) {
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
  };

  SolveResult out;
  out.x.assign(n, 0.0);
  if (!initial_guess.empty())
    std::copy(initial_guess.begin(), initial_guess.end(), out.x.begin());

  const double bnorm = std::sqrt(dotp(b, b));
  if (bnorm == 0.0) {
    std::fill(out.x.begin(), out.x.end(), 0.0);
    return out;
  }

  std::vector<double> inv_diag = a.diagonal();
  for (double &d : inv_diag) {
    if (!(d > 0.0))
      throw SolverError("matrix has a non-positive diagonal entry");
    d = 1.0 / d;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  auto true_residual = [&] {
    a.multiply(out.x, q);
    for (std::size_t i = 0; i < n; ++i)
      r[i] = b[i] - q[i];
    return std::sqrt(dotp(r, r));
  };

  // The recursive residual drifts from b - Ax in floating point; restart
  // from the current iterate until the true residual meets the tolerance.
  double rnorm = true_residual();
  for (int restart = 0; rnorm > tol * bnorm; ++restart) {
    if (restart == 20)
      throw SolverError("conjugate gradients stagnated at relative residual " +
                        std::to_string(rnorm / bnorm));
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] = inv_diag[i] * r[i];
    double rz = dotp(r, z);
    double recursive = rnorm;
    while (recursive > tol * bnorm) {
      if (out.iterations == max_iterations)
        throw SolverError("conjugate gradients did not converge in " +
                          std::to_string(max_iterations) +
                          " iterations (relative residual " +
                          std::to_string(recursive / bnorm) + ")");
      a.multiply(p, q);
      const double pq = dotp(p, q);
      if (!(pq > 0.0))
        throw SolverError("matrix is not positive definite");
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        out.x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
        z[i] = inv_diag[i] * r[i];
      }
      ++out.iterations;
      recursive = std::sqrt(dotp(r, r));
      const double rz_new = dotp(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i)
        p[i] = z[i] + beta * p[i];
    }
    rnorm = true_residual();
  }
  out.relative_residual = rnorm / bnorm;
  return out;
}

std::vector<double> solve_dense(const SparseSpd &a, std::span<const double> b) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (auto k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      m(i, a.cols()[k]) = a.values()[k];
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw SolverError("dense Cholesky failed: matrix is not SPD");
  const Eigen::VectorXd x = llt.solve(rhs);
  return {x.data(), x.data() + n};
}

CrFunction solve_problem(const Mesh &mesh, const SourceTerm &f, double tol) {
  const auto sys = assemble(mesh, f);
  auto result = solve(sys.matrix, sys.rhs, tol);
  return CrFunction(mesh, std::move(result.x));
}

} // namespace crlab
