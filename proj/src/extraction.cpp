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

#include "agcn/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "agcn/parallel.hpp"
#include "agcn/random.hpp"

namespace agcn {

bool Subgraph::has_edge(std::uint32_t u, std::uint32_t v) const {
  auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

void Subgraph::rebuild_adjacency() {
  const std::size_t n = local_ids.size();
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> lists(n);
  for (std::uint32_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    if (ed.u >= n || ed.v >= n || ed.u == ed.v)
      throw ShapeMismatch("subgraph edge (" + std::to_string(ed.u) + ", " +
                          std::to_string(ed.v) + ") invalid for " + std::to_string(n) +
                          " nodes");
    lists[ed.u].emplace_back(ed.v, e);
    lists[ed.v].emplace_back(ed.u, e);
  }
  offsets.assign(n + 1, 0);
  adj.clear();
  adj_edge.clear();
  adj.reserve(2 * edges.size());
  adj_edge.reserve(2 * edges.size());
  for (std::size_t u = 0; u < n; ++u) {
    std::sort(lists[u].begin(), lists[u].end());
    for (auto [v, e] : lists[u]) {
      adj.push_back(v);
      adj_edge.push_back(e);
    }
    offsets[u + 1] = static_cast<std::uint32_t>(adj.size());
  }
}

Subgraph make_subgraph(std::vector<NodeId> local_ids, Matrix node_matrix,
                       std::vector<Subgraph::Edge> edges, ExtractionMode mode) {
  if (node_matrix.rows() != local_ids.size())
    throw ShapeMismatch("node matrix rows do not match node count");
  Subgraph sub;
  sub.local_ids = std::move(local_ids);
  sub.node_matrix = std::move(node_matrix);
  sub.edges = std::move(edges);
  for (auto& e : sub.edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  sub.mode = mode;
  sub.rebuild_adjacency();
  return sub;
}

Subgraph extract_subgraph(const AttributedGraph& g, NodeId i, NodeId j, std::size_t hops,
                          std::size_t max_neighbors, ExtractionMode mode, std::uint64_t seed) {
  g.check_node(i);
  g.check_node(j);
  if (i == j) throw TargetsEqual("target pair (" + std::to_string(i) + ", " +
                                 std::to_string(j) + ") has equal endpoints");
  if (hops < 1) throw DataError("hop count must be at least 1");
  if (max_neighbors < 1) throw DataError("neighbor cap must be at least 1");

  const bool drop_target = mode == ExtractionMode::kTrainPositive;
  auto is_target_edge = [&](NodeId a, NodeId b) {
    return drop_target && ((a == i && b == j) || (a == j && b == i));
  };

  Rng rng(mix_seed(seed, i, j));
  std::vector<NodeId> ids{i, j};
  std::unordered_map<NodeId, std::uint32_t> local{{i, 0}, {j, 1}};
  std::vector<NodeId> frontier{i, j};
  std::vector<NodeId> candidates;

  for (std::size_t round = 0; round < hops && !frontier.empty(); ++round) {
    std::vector<NodeId> next;
    for (NodeId v : frontier) {
      candidates.clear();
      for (NodeId u : g.neighbors(v))
        if (!is_target_edge(v, u)) candidates.push_back(u);
      if (candidates.size() > max_neighbors) {
        // Partial Fisher-Yates: first max_neighbors slots become the sample.
        for (std::size_t k = 0; k < max_neighbors; ++k) {
          const std::size_t pick = k + rng.below(candidates.size() - k);
          std::swap(candidates[k], candidates[pick]);
        }
        candidates.resize(max_neighbors);
        std::sort(candidates.begin(), candidates.end());
      }
      for (NodeId u : candidates) {
        if (local.contains(u)) continue;
        local.emplace(u, static_cast<std::uint32_t>(ids.size()));
        ids.push_back(u);
        next.push_back(u);
      }
    }
    frontier = std::move(next);
  }

  std::vector<Subgraph::Edge> edges;
  for (std::uint32_t lu = 0; lu < ids.size(); ++lu) {
    const NodeId gu = ids[lu];
    auto nbrs = g.neighbors(gu);
    auto eids = g.incident_edges(gu);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      auto it = local.find(nbrs[k]);
      if (it == local.end() || it->second <= lu) continue;
      if (is_target_edge(gu, nbrs[k])) continue;
      edges.push_back({lu, it->second, g.edge_attr_by_id(eids[k])});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::pair{a.u, a.v} < std::pair{b.u, b.v};
  });

  Matrix nodes(ids.size(), g.node_dim());
  for (std::size_t r = 0; r < ids.size(); ++r)
    for (auto [dim, w] : g.node_attr(ids[r]).entries) nodes(r, dim) = static_cast<Scalar>(w);

  return make_subgraph(std::move(ids), std::move(nodes), std::move(edges), mode);
}

namespace {

struct PathSearch {
  const Subgraph& sub;
  std::size_t max_length;
  std::size_t max_paths;
  PathBundle bundle;
  std::vector<std::uint32_t> nodes;
  std::vector<std::uint32_t> edges;
  std::vector<char> on_path;

  bool visit(std::uint32_t u) {
    auto nbrs = sub.neighbors(u);
    auto eids = sub.incident_edges(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const std::uint32_t v = nbrs[k];
      if (v == 1) {
        if (bundle.paths.size() >= max_paths) {
          bundle.truncated = true;
          return false;
        }
        PathRecord p;
        p.node_seq = nodes;
        p.node_seq.push_back(1);
        for (auto e : edges) p.edge_seq.push_back(sub.edges[e].attr);
        p.edge_seq.push_back(sub.edges[eids[k]].attr);
        bundle.paths.push_back(std::move(p));
        continue;
      }
      if (on_path[v] || edges.size() + 1 >= max_length) continue;
      on_path[v] = 1;
      nodes.push_back(v);
      edges.push_back(eids[k]);
      const bool go_on = visit(v);
      edges.pop_back();
      nodes.pop_back();
      on_path[v] = 0;
      if (!go_on) return false;
    }
    return true;
  }
};

}  // namespace

PathBundle enumerate_paths(const Subgraph& sub, std::size_t max_length, std::size_t max_paths) {
  if (max_length < 1) throw DataError("path length bound must be at least 1");
  if (sub.node_count() < 2) throw ShapeMismatch("subgraph has no target pair");
  PathSearch search{sub, max_length, max_paths, {}, {0}, {}, std::vector<char>(sub.node_count(), 0)};
  search.on_path[0] = 1;
  search.visit(0);
  return std::move(search.bundle);
}

TrainingExample make_example(const AttributedGraph& g, NodeId i, NodeId j, int label,
                             ExtractionMode mode, const ExtractOptions& opts) {
  TrainingExample ex;
  ex.i = i;
  ex.j = j;
  ex.label = label;
  ex.sub = extract_subgraph(g, i, j, opts.hops, opts.max_neighbors, mode, opts.seed);
  ex.bundle = enumerate_paths(ex.sub, opts.path_length(), opts.max_paths);
  return ex;
}

std::vector<TrainingExample> build_dataset(const AttributedGraph& g,
                                           std::span<const std::pair<NodeId, NodeId>> positives,
                                           double neg_ratio, const ExtractOptions& opts,
                                           unsigned threads) {
  if (!(neg_ratio > 0)) throw DataError("neg_ratio must be positive");
  for (auto [i, j] : positives) {
    if (!g.has_edge(i, j))
      throw PositiveNotAnEdge("positive pair (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") is not an edge");
  }

  const std::size_t n_neg =
      static_cast<std::size_t>(std::ceil(neg_ratio * static_cast<double>(positives.size())));
  std::vector<std::pair<NodeId, NodeId>> negatives;
  negatives.reserve(n_neg);
  Rng rng(mix_seed(opts.seed, 0x6e65676174697665ULL));
  const std::size_t n = g.node_count();
  std::size_t budget = 1000 + 100 * n_neg;
  while (negatives.size() < n_neg) {
    if (n < 2 || budget-- == 0)
      throw NegativeSamplingExhausted("found " + std::to_string(negatives.size()) + " of " +
                                      std::to_string(n_neg) +
                                      " non-adjacent pairs before the retry budget ran out");
    const auto a = static_cast<NodeId>(rng.below(n));
    const auto b = static_cast<NodeId>(rng.below(n));
    if (a == b || g.has_edge(a, b)) continue;
    negatives.emplace_back(a, b);
  }

  std::vector<TrainingExample> out(positives.size() + negatives.size());
  parallel_for(out.size(), threads, [&](std::size_t k) {
    if (k < positives.size())
      out[k] = make_example(g, positives[k].first, positives[k].second, 1,
                            ExtractionMode::kTrainPositive, opts);
    else {
      auto [a, b] = negatives[k - positives.size()];
      out[k] = make_example(g, a, b, 0, ExtractionMode::kInference, opts);
    }
  });
  return out;
}

std::vector<TrainingExample> build_labeled_dataset(const AttributedGraph& g,
                                                   std::span<const LabeledPair> pairs,
                                                   const ExtractOptions& opts, unsigned threads) {
  std::vector<TrainingExample> out(pairs.size());
  parallel_for(out.size(), threads, [&](std::size_t k) {
    const auto& p = pairs[k];
    const auto mode =
        g.has_edge(p.i, p.j) ? ExtractionMode::kTrainPositive : ExtractionMode::kInference;
    out[k] = make_example(g, p.i, p.j, p.label, mode, opts);
  });
  return out;
}

}  // namespace agcn
