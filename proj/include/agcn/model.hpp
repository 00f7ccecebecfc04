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

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "agcn/extraction.hpp"
#include "agcn/graph.hpp"
#include "agcn/tensor.hpp"

namespace agcn {

enum class ModelKind : std::uint32_t {
  kAgcn = 0,
  /// Attribute-concatenating GCN baseline, see baselines.hpp.
  kConcat = 1,
};

const char* to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct ModelConfig {
  ModelKind kind = ModelKind::kAgcn;
  /// Node attribute dimension d (F^0).
  std::size_t input_dim = 1;
  /// Cardinality of each edge attribute group; sums to the one-hot width n.
  std::vector<std::uint32_t> group_cardinalities;
  std::uint64_t schema_hash = 0;
  std::size_t layers = 2;
  /// F^l for l >= 1, also the interaction width F^{l'}.
  std::size_t hidden = 32;
  std::size_t mlp_hidden = 32;
  Scalar leaky_slope = Scalar(0.01);
  /// Readout (u + v, |u - v|) instead of (u, v).
  bool symmetric_readout = false;
  /// Groups projected by W_E in the interaction unit; empty selects all.
  /// Masked groups are treated as missing there (the path unit still sees them).
  std::vector<bool> interaction_groups;

  static ModelConfig for_graph(const AttributedGraph& g, ModelKind kind = ModelKind::kAgcn);

  std::size_t group_count() const noexcept { return group_cardinalities.size(); }
  std::size_t edge_dim() const noexcept;
  std::size_t layer_width(std::size_t l) const noexcept { return l == 0 ? input_dim : hidden; }
  bool projects_group(std::size_t g) const {
    return interaction_groups.empty() || interaction_groups.at(g);
  }
  /// Throws SchemaMismatch if the schema differs from the one trained on.
  void check_schema(const AttrGroupSchema& schema) const;
};

/// Groups whose non-missing coverage over the graph's edges is at least tau.
std::vector<bool> select_high_frequency_groups(const AttributedGraph& g, double tau);

/// Trainable tensors in declared order. AGCN layout, per layer l:
/// W_E^l (n x F'), W_V^l (F^l x F'), W^l (F' x F^{l+1}); then the classifier
/// C1 ((2 F^L + b) x H), c1 (1 x H), C2 (H x 1), c2 (1 x 1).
struct ModelParams {
  ModelConfig config;
  std::vector<Matrix> tensors;
  std::vector<std::string> names;

  /// Glorot-uniform weights, zero biases and a zero output layer, so every
  /// initial prediction is exactly 0.5.
  static ModelParams initialize(const ModelConfig& config, std::uint64_t seed);
  static ModelParams zeros(const ModelConfig& config);

  std::size_t scalar_count() const noexcept;
  bool all_finite() const noexcept;
  bool operator==(const ModelParams& other) const { return tensors == other.tensors; }
};

struct ForwardState {
  /// V^0 .. V^L.
  std::vector<Matrix> layers;
  std::vector<Scalar> path_encoding;
  Scalar logit = 0;
  Scalar probability = 0.5;
};

/// Interaction unit for one node-edge pair: (E_xy W_E) ⊙ (V_x W_V).
Matrix interaction_unit_forward(std::span<const Scalar> node_row, const EdgeAttr& edge,
                                const ModelParams& params, std::size_t layer);

/// One AGCN aggregation layer over the subgraph.
Matrix gcn_layer_forward(const Subgraph& sub, const Matrix& v, const ModelParams& params,
                         std::size_t layer);

/// Per-group agreement bits of one path: bit g is 1 iff every edge carries the
/// same non-missing value in group g.
std::vector<Scalar> encode_path(const PathRecord& path, std::size_t group_count);
std::vector<Scalar> encode_path(const PathRecord& path, const AttrGroupSchema& schema);

/// Sum of encode_path over the bundle (zero vector when empty).
std::vector<Scalar> path_unit_forward(const PathBundle& bundle, std::size_t group_count);

/// Full forward pass. Dispatches on params.config.kind.
ForwardState forward(const Subgraph& sub, const PathBundle& bundle, const ModelParams& params);

/// Records the model on a tape with `vars` holding params.tensors (same order)
/// and returns the 1 x 1 logit. `state`, when given, receives intermediate values.
Var record_logit(Tape& tape, const ModelParams& params, std::span<const Var> vars,
                 const Subgraph& sub, const PathBundle& bundle, ForwardState* state = nullptr);

namespace detail {

/// Message-passing index arrays shared by every layer of one subgraph.
struct LayerPlan {
  std::shared_ptr<const OneHotRows> edge_onehot;  // one row per undirected edge
  std::vector<std::uint32_t> src;                  // per directed edge
  std::vector<std::uint32_t> dst;
  std::vector<std::uint32_t> edge;
  std::vector<Scalar> norm;                        // 1 / (|N(y)| + 1)
};

LayerPlan plan_layers(const Subgraph& sub, const ModelConfig& config);
OneHotRows edge_onehot(std::span<const EdgeAttr* const> edges, const ModelConfig& config);

/// Classifier head: leaky(x C1 + c1) C2 + c2.
Var record_classifier(Tape& tape, const ModelConfig& config, Var x, Var c1w, Var c1b, Var c2w,
                      Var c2b);

}  // namespace detail

}  // namespace agcn
