// Copyright 2026 The AGCN Authors
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

#include <span>

#include "agcn/graph.hpp"
#include "agcn/model.hpp"
#include "agcn/tensor.hpp"

namespace agcn {

/// |N(i) ∩ N(j)| by merging the sorted neighbor lists.
std::size_t common_neighbors_score(const AttributedGraph& g, NodeId i, NodeId j);

/// |N(i) ∩ N(j)| / |N(i) ∪ N(j)|; 0 when both are isolated.
double jaccard_coefficient(const AttributedGraph& g, NodeId i, NodeId j);

/// Weight given to a common neighbor of degree 1, where 1 / ln(1) diverges.
inline constexpr double kAdamicAdarDegreeOneWeight = 1e6;

/// Σ over common neighbors z of 1 / ln |N(z)| (natural log).
double adamic_adar_score(const AttributedGraph& g, NodeId i, NodeId j,
                         double degree_one_weight = kAdamicAdarDegreeOneWeight);

enum class HeuristicMethod { kCommonNeighbors, kJaccard, kAdamicAdar };

HeuristicMethod parse_heuristic(std::string_view name);
double heuristic_score(const AttributedGraph& g, HeuristicMethod method, NodeId i, NodeId j);

/// Concatenation GCN: a neighbor x contributes [V_x ‖ E_xy W_E] and the node
/// itself [V_y ‖ 0]; the sum is normalized by 1 / (|N(y)| + 1), multiplied by
/// the widened W^l and activated. No interaction unit and no path unit; the
/// readout is [V_i ‖ V_j]. params.config.kind must be ModelKind::kConcat.
Var record_concat_logit(Tape& tape, const ModelParams& params, std::span<const Var> vars,
                        const Subgraph& sub, ForwardState* state = nullptr);

/// Forward pass of the concatenation baseline.
ForwardState concat_gnn_forward(const Subgraph& sub, const ModelParams& params);

}  // namespace agcn
