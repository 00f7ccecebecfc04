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
#include <span>
#include <utility>
#include <vector>

#include "agcn/graph.hpp"
#include "agcn/tensor.hpp"

namespace agcn {

enum class ExtractionMode {
  /// Target edge (i, j) is treated as absent, both for sampling and for the
  /// induced edge set.
  kTrainPositive,
  kInference,
};

/// h-hop enclosing subgraph around a target pair. Local index 0 is i, 1 is j.
struct Subgraph {
  struct Edge {
    std::uint32_t u = 0;  // local, u < v
    std::uint32_t v = 0;
    EdgeAttr attr;
  };

  std::vector<NodeId> local_ids;
  /// |local_ids| x d dense node attributes.
  Matrix node_matrix;
  std::vector<Edge> edges;
  /// Local CSR: neighbors of u are adj[offsets[u] .. offsets[u+1]) in ascending
  /// order, adj_edge holds the matching index into edges.
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> adj;
  std::vector<std::uint32_t> adj_edge;
  ExtractionMode mode = ExtractionMode::kInference;

  std::size_t node_count() const noexcept { return local_ids.size(); }
  std::size_t degree(std::uint32_t u) const { return offsets[u + 1] - offsets[u]; }
  std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
    return {adj.data() + offsets[u], offsets[u + 1] - offsets[u]};
  }
  std::span<const std::uint32_t> incident_edges(std::uint32_t u) const {
    return {adj_edge.data() + offsets[u], offsets[u + 1] - offsets[u]};
  }
  bool has_edge(std::uint32_t u, std::uint32_t v) const;

  /// Builds local adjacency from `edges`. Used by extraction and by tests
  /// that construct subgraphs by hand.
  void rebuild_adjacency();
};

/// Builds a Subgraph directly from local edges (rebuilds adjacency).
Subgraph make_subgraph(std::vector<NodeId> local_ids, Matrix node_matrix,
                       std::vector<Subgraph::Edge> edges,
                       ExtractionMode mode = ExtractionMode::kInference);

struct PathRecord {
  std::vector<std::uint32_t> node_seq;
  std::vector<EdgeAttr> edge_seq;

  std::size_t length() const noexcept { return edge_seq.size(); }
};

struct PathBundle {
  std::vector<PathRecord> paths;
  bool truncated = false;
};

struct ExtractOptions {
  std::size_t hops = 2;
  std::size_t max_neighbors = 20;
  /// 0 means "same as hops".
  std::size_t max_path_length = 0;
  std::size_t max_paths = 64;
  std::uint64_t seed = 0;

  std::size_t path_length() const noexcept { return max_path_length ? max_path_length : hops; }
};

/// Enclosing-subgraph extraction: a BFS of `hops` rounds from {i, j} where
/// each frontier node contributes at most `max_neighbors` of its neighbors,
/// sampled uniformly without replacement when its degree exceeds the cap.
/// Nodes are numbered in discovery order; edges are those induced in g.
Subgraph extract_subgraph(const AttributedGraph& g, NodeId i, NodeId j, std::size_t hops,
                          std::size_t max_neighbors, ExtractionMode mode, std::uint64_t seed);

/// Depth-first enumeration of simple paths local 0 -> local 1 with at most
/// max_length edges, neighbors visited in ascending local index.
PathBundle enumerate_paths(const Subgraph& sub, std::size_t max_length, std::size_t max_paths);

struct TrainingExample {
  NodeId i = 0;
  NodeId j = 0;
  Subgraph sub;
  PathBundle bundle;
  int label = 0;
};

struct LabeledPair {
  NodeId i = 0;
  NodeId j = 0;
  int label = 0;
};

/// Positives are extracted in train-positive mode with label 1; then
/// ceil(neg_ratio * |positives|) non-adjacent pairs are drawn uniformly and
/// extracted in inference mode with label 0. Output: positives in input order,
/// then negatives in draw order.
std::vector<TrainingExample> build_dataset(const AttributedGraph& g,
                                           std::span<const std::pair<NodeId, NodeId>> positives,
                                           double neg_ratio, const ExtractOptions& opts,
                                           unsigned threads = 1);

/// Extracts externally labeled pairs. A pair that is an edge of g is extracted
/// in train-positive mode so the model never sees the link it is scoring.
std::vector<TrainingExample> build_labeled_dataset(const AttributedGraph& g,
                                                   std::span<const LabeledPair> pairs,
                                                   const ExtractOptions& opts,
                                                   unsigned threads = 1);

TrainingExample make_example(const AttributedGraph& g, NodeId i, NodeId j, int label,
                             ExtractionMode mode, const ExtractOptions& opts);

}  // namespace agcn
