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

#include "agcn/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

namespace agcn {

AttrGroupSchema::AttrGroupSchema(std::vector<Group> groups) : groups_(std::move(groups)) {
  std::unordered_set<std::string> seen;
  offsets_.reserve(groups_.size());
  for (const auto& g : groups_) {
    if (g.name.empty()) throw SchemaMismatch("attribute group with empty name");
    if (g.cardinality < 1)
      throw SchemaMismatch("attribute group '" + g.name + "' has cardinality 0");
    if (!seen.insert(g.name).second)
      throw SchemaMismatch("duplicate attribute group '" + g.name + "'");
    offsets_.push_back(total_dim_);
    total_dim_ += g.cardinality;
  }
}

std::optional<std::size_t> AttrGroupSchema::find(std::string_view name) const {
  for (std::size_t g = 0; g < groups_.size(); ++g)
    if (groups_[g].name == name) return g;
  return std::nullopt;
}

std::uint64_t AttrGroupSchema::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& g : groups_) {
    feed(g.name);
    feed("\t");
    feed(std::to_string(g.cardinality));
    feed("\n");
  }
  return h;
}

bool AttrGroupSchema::operator==(const AttrGroupSchema& other) const {
  if (groups_.size() != other.groups_.size()) return false;
  for (std::size_t g = 0; g < groups_.size(); ++g)
    if (groups_[g].name != other.groups_[g].name ||
        groups_[g].cardinality != other.groups_[g].cardinality)
      return false;
  return true;
}

void AttributedGraph::check_node(NodeId v) const {
  if (v >= node_count())
    throw NodeIdOutOfRange("node " + std::to_string(v) + " out of range (node_count " +
                           std::to_string(node_count()) + ")");
}

std::size_t AttributedGraph::degree(NodeId v) const {
  check_node(v);
  return offsets_[v + 1] - offsets_[v];
}

std::span<const NodeId> AttributedGraph::neighbors(NodeId v) const {
  check_node(v);
  return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const std::uint32_t> AttributedGraph::incident_edges(NodeId v) const {
  check_node(v);
  return {adjacency_edge_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::optional<std::uint32_t> AttributedGraph::edge_id(NodeId i, NodeId j) const {
  check_node(i);
  check_node(j);
  // Search the shorter list.
  if (degree(i) > degree(j)) std::swap(i, j);
  auto nbrs = neighbors(i);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j);
  if (it == nbrs.end() || *it != j) return std::nullopt;
  return adjacency_edge_[offsets_[i] + static_cast<std::size_t>(it - nbrs.begin())];
}

const EdgeAttr* AttributedGraph::edge_attr(NodeId i, NodeId j) const {
  auto e = edge_id(i, j);
  return e ? &edge_attrs_[*e] : nullptr;
}

const NodeAttr& AttributedGraph::node_attr(NodeId v) const {
  check_node(v);
  return node_attrs_[v];
}

bool AttributedGraph::operator==(const AttributedGraph& other) const {
  return schema_ == other.schema_ && node_dim_ == other.node_dim_ &&
         node_attrs_ == other.node_attrs_ && offsets_ == other.offsets_ &&
         adjacency_ == other.adjacency_ && adjacency_edge_ == other.adjacency_edge_ &&
         edge_attrs_ == other.edge_attrs_ && edge_ends_ == other.edge_ends_;
}

namespace {

std::string edge_name(std::size_t index, const EdgeInput& e) {
  return "edge #" + std::to_string(index) + " (" + std::to_string(e.u) + ", " +
         std::to_string(e.v) + ")";
}

void check_edge_attr(const AttrGroupSchema& schema, const EdgeAttr& attr,
                     const std::string& where) {
  if (attr.values.size() != schema.group_count())
    throw SchemaMismatch(where + ": " + std::to_string(attr.values.size()) +
                         " attribute values, schema has " +
                         std::to_string(schema.group_count()) + " groups");
  for (std::size_t g = 0; g < attr.values.size(); ++g) {
    const auto v = attr.values[g];
    if (v == EdgeAttr::kMissing) continue;
    if (v < 0 || static_cast<std::uint32_t>(v) >= schema.group(g).cardinality)
      throw SchemaMismatch(where + ": value " + std::to_string(v) + " outside group '" +
                           schema.group(g).name + "' of cardinality " +
                           std::to_string(schema.group(g).cardinality));
  }
}

}  // namespace

AttributedGraph build_graph(std::vector<NodeAttr> nodes, std::vector<EdgeInput> edges,
                            AttrGroupSchema schema, std::optional<std::size_t> node_dim) {
  const std::size_t n = nodes.size();
  std::size_t used_dim = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& entries = nodes[v].entries;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (k > 0 && entries[k].first <= entries[k - 1].first)
        throw SchemaMismatch("node " + std::to_string(v) +
                             ": attribute dimensions must be strictly increasing");
      used_dim = std::max<std::size_t>(used_dim, entries[k].first + 1);
    }
  }
  if (node_dim && *node_dim < used_dim)
    throw SchemaMismatch("node attribute dimension " + std::to_string(used_dim - 1) +
                         " exceeds declared node_dim " + std::to_string(*node_dim));

  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto& e = edges[k];
    if (e.u >= n || e.v >= n)
      throw NodeIdOutOfRange(edge_name(k, e) + ": endpoint out of range (node_count " +
                             std::to_string(n) + ")");
    if (e.u == e.v) throw SelfLoop(edge_name(k, e) + ": self-loop");
    check_edge_attr(schema, e.attr, edge_name(k, e));
  }

  // Canonical order (min, max); stable so the reported duplicate is the later record.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&edges](std::size_t k) {
    const auto& e = edges[k];
    return std::pair{std::min(e.u, e.v), std::max(e.u, e.v)};
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (key(order[k]) == key(order[k - 1]))
      throw DuplicateEdge(edge_name(order[k], edges[order[k]]) + ": duplicates " +
                          edge_name(order[k - 1], edges[order[k - 1]]));

  AttributedGraph g;
  g.schema_ = std::move(schema);
  g.node_dim_ = node_dim.value_or(used_dim);
  g.node_attrs_ = std::move(nodes);

  const std::size_t m = edges.size();
  g.edge_attrs_.reserve(m);
  g.edge_ends_.reserve(m);
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t k : order) {
    auto [a, b] = key(k);
    g.edge_ends_.emplace_back(a, b);
    g.edge_attrs_.push_back(std::move(edges[k].attr));
    ++degree[a];
    ++degree[b];
  }

  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.adjacency_.resize(2 * m);
  g.adjacency_edge_.resize(2 * m);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::uint32_t e = 0; e < m; ++e) {
    auto [a, b] = g.edge_ends_[e];
    g.adjacency_[cursor[a]] = b;
    g.adjacency_edge_[cursor[a]++] = e;
    g.adjacency_[cursor[b]] = a;
    g.adjacency_edge_[cursor[b]++] = e;
  }
  // Neighbor lists sorted by id, edge ids kept parallel.
  for (std::size_t v = 0; v < n; ++v) {
    const auto lo = g.offsets_[v], hi = g.offsets_[v + 1];
    std::vector<std::pair<NodeId, std::uint32_t>> slot;
    slot.reserve(hi - lo);
    for (auto s = lo; s < hi; ++s) slot.emplace_back(g.adjacency_[s], g.adjacency_edge_[s]);
    std::sort(slot.begin(), slot.end());
    for (auto s = lo; s < hi; ++s) {
      g.adjacency_[s] = slot[s - lo].first;
      g.adjacency_edge_[s] = slot[s - lo].second;
    }
  }
  return g;
}

}  // namespace agcn
