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
#include "crlab/problem.hpp"

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace crlab {

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Symmetric matrix in compressed row storage (both triangles stored).
class SparseSpd {
public:
  SparseSpd() = default;
  SparseSpd(std::size_t n, std::vector<std::int32_t> row_ptr,
            std::vector<std::int32_t> cols, std::vector<double> values);

  std::size_t size() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  const std::vector<std::int32_t> &row_ptr() const { return row_ptr_; }
  const std::vector<std::int32_t> &cols() const { return cols_; }
  const std::vector<double> &values() const { return values_; }

  double operator()(std::size_t i, std::size_t j) const;
  std::vector<double> diagonal() const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

private:
  std::size_t n_ = 0;
  std::vector<std::int32_t> row_ptr_;
  std::vector<std::int32_t> cols_;
  std::vector<double> values_;
};

/// ∫_T ∇Ψ_i · ∇Ψ_j for the CR basis functions of the sides of t, local
/// side order, boundary sides included.
std::array<std::array<double, 3>, 3> local_stiffness(const Mesh &mesh,
                                                     ElementId t);

/// ∫ ∇_h Ψ_F^CR · ∇_h Ψ_F'^CR over interior edges in dof order.
SparseSpd assemble_stiffness(const Mesh &mesh);

/// ⟨f, E_CR Ψ_F^CR⟩ for every interior edge.
std::vector<double> assemble_rhs(const Mesh &mesh, const SourceTerm &f);
std::vector<double> assemble_rhs(const Mesh &mesh, const Loads &loads);

struct LinearSystem {
  SparseSpd matrix;
  std::vector<double> rhs;
};

LinearSystem assemble(const Mesh &mesh, const SourceTerm &f);

struct SolveResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
};

inline constexpr double kDefaultTolerance = 1e-12;

/// Jacobi-preconditioned conjugate gradients until ∥b - Ax∥ <= tol ∥b∥.
/// Throws SolverError when the iteration cap is reached or a non-positive
/// curvature is met.
SolveResult solve(const SparseSpd &a, std::span<const double> b,
                  double tol = kDefaultTolerance,
                  std::span<const double> initial_guess = {},
                  int max_iterations = 0);

/// Dense Cholesky solve, intended as a reference for n <= 2000.
std::vector<double> solve_dense(const SparseSpd &a, std::span<const double> b);

/// Assemble and solve for the smoothed CR approximation.
CrFunction solve_problem(const Mesh &mesh, const SourceTerm &f,
                         double tol = kDefaultTolerance);

} // namespace crlab
