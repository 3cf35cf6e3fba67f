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

#include <span>
#include <vector>

namespace crlab {

/// Nodal averaging into continuous piecewise linears: interior vertex
/// values are the mean of the one-sided traces over the vertex star,
/// boundary vertices get 0.
ConformingFunction average_acr(const CrFunction &v);

/// Averaging plus one edge-bubble correction per interior edge, chosen so
/// that the result has the same mean as v on every edge.
ConformingFunction smooth_ecr(const CrFunction &v);

/// Transpose of smooth_ecr. Given ⟨f, Ψ_z⟩ per vertex and ⟨f, Ψ_F⟩ per
/// edge (indexed by mesh ids), returns ⟨f, E Ψ_F^CR⟩ for every interior
/// edge in dof order.
std::vector<double> smooth_ecr_transpose(const Mesh &mesh,
                                         std::span<const double> vertex_loads,
                                         std::span<const double> edge_loads);

/// Carries v from the mesh `fine` was refined from onto `fine`: each new
/// edge takes the mean of the parent traces at its midpoint. Exact for
/// continuous piecewise linears. Throws std::invalid_argument if `fine`
/// does not descend from v's mesh.
CrFunction prolongate_cr(const CrFunction &v, const Mesh &fine);

} // namespace crlab
