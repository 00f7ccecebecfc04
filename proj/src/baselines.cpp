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

#include "agcn/baselines.hpp"

#include <cmath>

namespace agcn {

namespace {

template <typename Fn>
void for_each_common(const AttributedGraph& g, NodeId i, NodeId j, Fn&& fn) {
  auto a = g.neighbors(i);
  auto b = g.neighbors(j);
  std::size_t p = 0, q = 0;
  while (p < a.size() && q < b.size()) {
    if (a[p] < b[q]) {
      ++p;
    } else if (b[q] < a[p]) {
      ++q;
    } else {
      fn(a[p]);
      ++p;
      ++q;
    }
  }
}

}  // namespace

std::size_t common_neighbors_score(const AttributedGraph& g, NodeId i, NodeId j) {
  std::size_t count = 0;
  for_each_common(g, i, j, [&](NodeId) { ++count; });
  return count;
}

double jaccard_coefficient(const AttributedGraph& g, NodeId i, NodeId j) {
  const std::size_t inter = common_neighbors_score(g, i, j);
  const std::size_t uni = g.degree(i) + g.degree(j) - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double adamic_adar_score(const AttributedGraph& g, NodeId i, NodeId j, double degree_one_weight) {
  double score = 0;
  for_each_common(g, i, j, [&](NodeId z) {
    const std::size_t d = g.degree(z);
    score += d <= 1 ? degree_one_weight : 1.0 / std::log(static_cast<double>(d));
  });
  return score;
}

HeuristicMethod parse_heuristic(std::string_view name) {
  if (name == "cn") return HeuristicMethod::kCommonNeighbors;
  if (name == "jaccard") return HeuristicMethod::kJaccard;
  if (name == "aa") return HeuristicMethod::kAdamicAdar;
  throw DataError("unknown heuristic '" + std::string(name) + "'");
}

double heuristic_score(const AttributedGraph& g, HeuristicMethod method, NodeId i, NodeId j) {
  switch (method) {
    case HeuristicMethod::kCommonNeighbors:
      return static_cast<double>(common_neighbors_score(g, i, j));
    case HeuristicMethod::kJaccard:
      return jaccard_coefficient(g, i, j);
    case HeuristicMethod::kAdamicAdar:
      return adamic_adar_score(g, i, j);
  }
  return 0;
}

Var record_concat_logit(Tape& tape, const ModelParams& params, std::span<const Var> vars,
                        const Subgraph& sub, ForwardState* state) {
  const auto& c = params.config;
  if (c.kind != ModelKind::kConcat) throw ShapeMismatch("params are not a concat model");
  if (vars.size() != params.tensors.size())
    throw ShapeMismatch("parameter variable count mismatch");
  if (sub.node_count() < 2) throw ShapeMismatch("subgraph has no target pair");
  if (sub.node_matrix.cols() != c.input_dim)
    throw ShapeMismatch("node matrix width does not match model input_dim");

  const auto plan = detail::plan_layers(sub, c);
  const std::size_t n = sub.node_count();
  Var self_pad = tape.constant(Matrix(n, c.hidden));
  Var v = tape.constant(sub.node_matrix);
  if (state) state->layers.push_back(tape.value(v));
  for (std::size_t l = 0; l < c.layers; ++l) {
    Var w_e = vars[2 * l];
    Var w = vars[2 * l + 1];
    Var edge_proj = tape.matmul(plan.edge_onehot, w_e);
    Var msg_parts[] = {tape.gather_rows(v, plan.src), tape.gather_rows(edge_proj, plan.edge)};
    Var messages = tape.concat_cols(msg_parts);
    Var self_parts[] = {v, self_pad};
    Var summed = tape.add(tape.concat_cols(self_parts), tape.scatter_add_rows(messages, plan.dst, n));
    Var normed = tape.scale_rows(summed, plan.norm);
    v = tape.leaky_relu(tape.matmul(normed, w), c.leaky_slope);
    if (state) state->layers.push_back(tape.value(v));
  }
  Var x = tape.flatten_rows(v, {0, 1});
  const std::size_t k = 2 * c.layers;
  return detail::record_classifier(tape, c, x, vars[k], vars[k + 1], vars[k + 2], vars[k + 3]);
}

ForwardState concat_gnn_forward(const Subgraph& sub, const ModelParams& params) {
  return forward(sub, PathBundle{}, params);
}

}  // namespace agcn
