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

#include <optional>
#include <string_view>
#include <vector>

namespace crlab {

/// CR: element and interior-face bubbles. CR-tilde: element bubbles only.
enum class Variant { cr, cr_tilde };

std::string_view to_string(Variant v);
/// Accepts "cr" and "crtilde" (also "cr-tilde", "cr_tilde").
Variant parse_variant(std::string_view s);

/// ∥∇_h(u_h - A_CR u_h)∥²_{L²(T)} per element.
std::vector<double> ncf_avg(const CrFunction &uh);

/// Scaled jumps ∫_F |⟦u_h⟧|²/h_F per edge, halved onto the two elements of
/// an interior edge; boundary edges go to their single element.
std::vector<double> ncf_jump(const CrFunction &uh);

/// Hierarchical indicator with element and interior-face bubbles,
/// max_K |⟨f,Ψ_K⟩ - ∫∇_h u_h·∇Ψ_K| / ∥∇Ψ_K∥ per element (not squared).
std::vector<double> eta_cr(const CrFunction &uh, const SourceTerm &f);
std::vector<double> eta_cr(const CrFunction &uh, const Loads &loads);

/// Element-bubble-only indicator, |⟨f,Ψ_T⟩| / ∥∇Ψ_T∥ per element.
std::vector<double> eta_crtilde(const CrFunction &uh, const SourceTerm &f);
std::vector<double> eta_crtilde(const CrFunction &uh, const Loads &loads);

/// Squared dual norm of the residual on the bubbles around z, g_zᵀ A_z⁻¹ g_z.
double patch_residual_norm(const CrFunction &uh, const SourceTerm &f,
                           VertexId z);
double patch_residual_norm(const CrFunction &uh, const Loads &loads,
                           VertexId z);

/// patch_residual_norm for every vertex, split equally over each star.
std::vector<double> patch_residual_per_element(const CrFunction &uh,
                                               const Loads &loads);

/// h_T² inf_c ∥f_reg - c∥²_{L²(T)} + h_T² (max_{T∩Λ} |w|)² per element.
std::vector<double> surrogate_osc(const SourceTerm &f, const Mesh &mesh);
std::vector<double> surrogate_osc(const SourceTerm &f, const Mesh &mesh,
                                  const ClipTable &clips);

struct ExactError {
  double global = 0.0;
  /// ∥∇_h(u - u_h)∥²_{L²(T)}.
  std::vector<double> per_element;
};

ExactError exact_error(const CrFunction &uh, const ExactSolution &u);

/// Squared per-element contributions of one estimator.
struct EstimatorParts {
  std::vector<double> ncf2;
  std::vector<double> eta2;
  std::vector<double> osc2;
};

struct EstimatorReport {
  Variant variant = Variant::cr;
  double c1 = 1.0;
  double c2 = 0.3;

  std::vector<double> ncf2;
  std::vector<double> eta2;
  std::vector<double> osc2;
  /// ncf2 + c1² eta2 + c2² osc2.
  std::vector<double> total2;

  double ncf = 0.0;
  double eta = 0.0;
  double osc = 0.0;
  double est = 0.0;

  std::optional<double> err;
  std::optional<double> effectivity;
  std::optional<double> eoc;
};

/// Throws std::invalid_argument if the parts live on different meshes.
EstimatorReport combine(EstimatorParts parts, double c1, double c2,
                        Variant variant,
                        std::optional<double> err = std::nullopt);

/// log(err/err_prev) / log(n_prev/n).
double eoc(double err_prev, std::size_t n_prev, double err, std::size_t n);

inline constexpr double kDefaultC1 = 1.0;
inline constexpr double kDefaultC2 = 0.3;

/// Everything for one solved mesh: shared pieces are computed once and
/// both variants are reported.
struct Estimates {
  EstimatorReport cr;
  EstimatorReport cr_tilde;
  std::optional<ExactError> error;

  const EstimatorReport &get(Variant v) const {
    return v == Variant::cr ? cr : cr_tilde;
  }
};

Estimates estimate(const CrFunction &uh, const SourceTerm &f,
                   const ExactSolution *u, double c1 = kDefaultC1,
                   double c2 = kDefaultC2);

} // namespace crlab
