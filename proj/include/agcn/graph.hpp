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
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "agcn/common.hpp"

namespace agcn {

using NodeId = std::uint32_t;

/// Ordered list of categorical edge-attribute groups. Each group is one-hot
/// encoded with its own cardinality; the concatenation has total_dim() entries.
class AttrGroupSchema {
 public:
  struct Group {
    std::string name;
    std::uint32_t cardinality = 1;
  };

  AttrGroupSchema() = default;
  explicit AttrGroupSchema(std::vector<Group> groups);

  std::size_t group_count() const noexcept { return groups_.size(); }
  std::size_t total_dim() const noexcept { return total_dim_; }
  const Group& group(std::size_t g) const { return groups_.at(g); }
  const std::vector<Group>& groups() const noexcept { return groups_; }
  /// Offset of group g's block inside the concatenated one-hot vector.
  std::size_t offset(std::size_t g) const { return offsets_.at(g); }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Stable 64-bit FNV-1a digest of names and cardinalities.
  std::uint64_t hash() const noexcept;

  bool operator==(const AttrGroupSchema& other) const;

 private:
  std::vector<Group> groups_;
  std::vector<std::size_t> offsets_;
  std::size_t total_dim_ = 0;
};

/// Per-group categorical indices of one edge; kMissing encodes an all-zero block.
struct EdgeAttr {
  static constexpr std::int32_t kMissing = -1;

  std::vector<std::int32_t> values;

  bool missing(std::size_t g) const { return values[g] == kMissing; }
  bool operator==(const EdgeAttr&) const = default;
};

/// Sparse node attribute row: (dimension, weight) pairs with strictly increasing dimension.
struct NodeAttr {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool operator==(const NodeAttr&) const = default;
};

struct EdgeInput {
  NodeId u = 0;
  NodeId v = 0;
  EdgeAttr attr;
};

/// Immutable undirected attributed graph in compressed sparse row form.
/// Each undirected edge is stored once in edge_attrs() and referenced from
/// both endpoints' adjacency slots.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  std::size_t node_count() const noexcept { return node_attrs_.size(); }
  std::size_t edge_count() const noexcept { return edge_attrs_.size(); }
  std::size_t node_dim() const noexcept { return node_dim_; }
  const AttrGroupSchema& schema() const noexcept { return schema_; }

  std::size_t degree(NodeId v) const;
  /// Sorted neighbor ids of v.
  std::span<const NodeId> neighbors(NodeId v) const;
  /// Edge ids parallel to neighbors(v).
  std::span<const std::uint32_t> incident_edges(NodeId v) const;

  std::optional<std::uint32_t> edge_id(NodeId i, NodeId j) const;
  bool has_edge(NodeId i, NodeId j) const { return edge_id(i, j).has_value(); }
  /// Shared attribute record of edge {i, j}, or nullptr when not adjacent.
  const EdgeAttr* edge_attr(NodeId i, NodeId j) const;

  const EdgeAttr& edge_attr_by_id(std::uint32_t e) const { return edge_attrs_.at(e); }
  /// Endpoints (u < v) of edge e.
  std::pair<NodeId, NodeId> edge_endpoints(std::uint32_t e) const { return edge_ends_.at(e); }
  const NodeAttr& node_attr(NodeId v) const;

  void check_node(NodeId v) const;

  bool operator==(const AttributedGraph& other) const;

 private:
  friend AttributedGraph build_graph(std::vector<NodeAttr>, std::vector<EdgeInput>,
                                     AttrGroupSchema, std::optional<std::size_t>);

  AttrGroupSchema schema_;
  std::size_t node_dim_ = 0;
  std::vector<NodeAttr> node_attrs_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<std::uint32_t> adjacency_edge_;
  std::vector<EdgeAttr> edge_attrs_;
  std::vector<std::pair<NodeId, NodeId>> edge_ends_;
};

/// Validates and freezes a graph. Edges are sorted by (min, max) endpoint.
/// node_dim defaults to one past the largest attribute dimension used.
/// Throws DuplicateEdge, SelfLoop, NodeIdOutOfRange or SchemaMismatch naming
/// the offending record.
AttributedGraph build_graph(std::vector<NodeAttr> nodes, std::vector<EdgeInput> edges,
                            AttrGroupSchema schema,
                            std::optional<std::size_t> node_dim = std::nullopt);

struct GraphFiles {
  std::filesystem::path schema;
  std::filesystem::path nodes;
  std::filesystem::path edges;

  /// schema.tsv / nodes.tsv / edges.tsv inside dir.
  static GraphFiles in_directory(const std::filesystem::path& dir);
};

struct IngestReport {
  std::size_t duplicate_edges_dropped = 0;
};

AttrGroupSchema read_schema(const std::filesystem::path& schema_file);

/// Streams the three TSV files into a graph. Repeated unordered pairs keep the
/// first occurrence and are counted in report (a warning goes to stderr).
AttributedGraph ingest(const GraphFiles& files, IngestReport* report = nullptr);
AttributedGraph ingest(const std::filesystem::path& node_file,
                       const std::filesystem::path& edge_file,
                       const std::filesystem::path& schema_file);

/// Writes the ingest formats byte-deterministically.
void export_graph(const AttributedGraph& g, const GraphFiles& files);

}  // namespace agcn
