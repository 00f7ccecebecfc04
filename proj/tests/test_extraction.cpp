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

#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"

using namespace agcn;

namespace {

AttrGroupSchema one_group() { return AttrGroupSchema({{"time", 4}}); }

AttributedGraph plain_graph(std::size_t n, std::vector<std::pair<NodeId, NodeId>> pairs) {
  std::vector<EdgeInput> edges;
  std::int32_t k = 0;
  for (auto [u, v] : pairs) edges.push_back({u, v, EdgeAttr{{k++ % 4}}});
  return build_graph(std::vector<NodeAttr>(n, NodeAttr{{{0, 1.0}}}), std::move(edges),
                     one_group());
}

std::size_t max_degree(const AttributedGraph& g) {
  std::size_t m = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) m = std::max(m, g.degree(v));
  return m;
}

}  // namespace

TEST_CASE("path graph extraction with one hop") {
  auto g = plain_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  auto sub = extract_subgraph(g, 0, 3, 1, 10, ExtractionMode::kInference, 0);
  CHECK(sub.local_ids == std::vector<NodeId>{0, 3, 1, 2});
  std::set<std::pair<NodeId, NodeId>> edges;
  for (const auto& e : sub.edges) edges.insert(std::minmax(sub.local_ids[e.u], sub.local_ids[e.v]));
  CHECK(edges == std::set<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}, {2, 3}});
}

TEST_CASE("star leaves share their centre") {
  auto g = plain_graph(3, {{2, 0}, {2, 1}});
  auto sub = extract_subgraph(g, 0, 1, 1, 10, ExtractionMode::kInference, 0);
  CHECK(sub.node_count() == 3);
  CHECK(sub.edges.size() == 2);
}

TEST_CASE("extraction argument errors") {
  auto g = plain_graph(3, {{0, 1}});
  CHECK_THROWS_AS(extract_subgraph(g, 1, 1, 1, 10, ExtractionMode::kInference, 0), TargetsEqual);
  CHECK_THROWS_AS(extract_subgraph(g, 0, 9, 1, 10, ExtractionMode::kInference, 0),
                  NodeIdOutOfRange);
}

TEST_CASE("uncapped extraction equals the brute-force enclosing subgraph") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = oracle::random_graph(seed, 5 + seed % 30, 0.15);
    const NodeId i = 0, j = static_cast<NodeId>(1 + seed % (g.node_count() - 1));
    for (std::size_t h : {1, 2, 3})
      for (auto mode : {ExtractionMode::kInference, ExtractionMode::kTrainPositive}) {
        auto sub = extract_subgraph(g, i, j, h, max_degree(g) + 1, mode, seed);
        auto expect = oracle::enclosing_subgraph(g, i, j, h, mode == ExtractionMode::kTrainPositive);
        auto got = oracle::as_global(sub);
        CHECK(got.nodes == expect.nodes);
        CHECK(got.edges == expect.edges);
        CHECK(sub.local_ids[0] == i);
        CHECK(sub.local_ids[1] == j);
      }
  }
}

TEST_CASE("capped extraction keeps subgraph invariants") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto g = oracle::random_graph(seed, 30, 0.3);
    const std::size_t cap = 1 + seed % 4, h = 2;
    auto sub = extract_subgraph(g, 3, 7, h, cap, ExtractionMode::kTrainPositive, seed);
    std::set<NodeId> ids(sub.local_ids.begin(), sub.local_ids.end());
    CHECK(ids.size() == sub.node_count());
    // at most 2 + 2*cap + 2*cap*cap nodes after two rounds
    CHECK(sub.node_count() <= 2 + 2 * cap + 2 * cap * cap);
    auto full = oracle::enclosing_subgraph(g, 3, 7, h, true);
    for (NodeId v : ids) CHECK(full.nodes.count(v) == 1);
    // induced edges over the sampled node set
    auto got = oracle::as_global(sub);
    for (NodeId a : ids)
      for (NodeId b : ids)
        if (a < b && std::minmax(a, b) != std::minmax<NodeId>(3, 7))
          CHECK(got.edges.count({a, b}) == (g.has_edge(a, b) ? 1u : 0u));
    CHECK(got.edges.count(std::minmax<NodeId>(3, 7)) == 0);
    // every non-target node within h hops of a target inside the subgraph
    std::vector<int> dist(sub.node_count(), -1);
    std::vector<std::uint32_t> queue{0, 1};
    dist[0] = dist[1] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (auto u : sub.neighbors(queue[q]))
        if (dist[u] < 0) {
          dist[u] = dist[queue[q]] + 1;
          queue.push_back(u);
        }
    for (int d : dist) {
      CHECK(d >= 0);
      CHECK(d <= static_cast<int>(h));
    }
  }
}

TEST_CASE("extraction is deterministic under a seed") {
  auto g = oracle::random_graph(9, 40, 0.3);
  auto a = extract_subgraph(g, 2, 5, 2, 3, ExtractionMode::kInference, 42);
  auto b = extract_subgraph(g, 2, 5, 2, 3, ExtractionMode::kInference, 42);
  CHECK(a.local_ids == b.local_ids);
  CHECK(a.node_matrix == b.node_matrix);
  bool any_differs = false;
  for (std::uint64_t s = 0; s < 20 && !any_differs; ++s)
    any_differs = extract_subgraph(g, 2, 5, 2, 3, ExtractionMode::kInference, s).local_ids !=
                  a.local_ids;
  CHECK(any_differs);
}

TEST_CASE("node matrix holds dense node attributes") {
  auto g = oracle::random_graph(4, 10, 0.4);
  auto sub = extract_subgraph(g, 0, 1, 2, 100, ExtractionMode::kInference, 0);
  for (std::size_t r = 0; r < sub.node_count(); ++r) {
    std::vector<double> dense(g.node_dim(), 0.0);
    for (auto [d, w] : g.node_attr(sub.local_ids[r]).entries) dense[d] = w;
    for (std::size_t c = 0; c < dense.size(); ++c) CHECK(sub.node_matrix(r, c) == dense[c]);
  }
}

TEST_CASE("triangle with the target edge removed has one path") {
  auto g = plain_graph(3, {{0, 1}, {0, 2}, {2, 1}});
  auto sub = extract_subgraph(g, 0, 1, 1, 10, ExtractionMode::kTrainPositive, 0);
  auto bundle = enumerate_paths(sub, 2, 64);
  REQUIRE(bundle.paths.size() == 1);
  CHECK(bundle.paths[0].node_seq == std::vector<std::uint32_t>{0, 2, 1});
  CHECK(bundle.paths[0].length() == 2);
  CHECK_FALSE(bundle.truncated);
}

TEST_CASE("disconnected targets give an empty bundle") {
  auto g = plain_graph(4, {{0, 2}, {1, 3}});
  auto sub = extract_subgraph(g, 0, 1, 2, 10, ExtractionMode::kInference, 0);
  auto bundle = enumerate_paths(sub, 2, 64);
  CHECK(bundle.paths.empty());
  CHECK_FALSE(bundle.truncated);
}

TEST_CASE("K_{2,3} has three length-2 paths between same-side nodes") {
  auto g = plain_graph(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
  auto sub = extract_subgraph(g, 0, 1, 1, 10, ExtractionMode::kInference, 0);
  auto bundle = enumerate_paths(sub, 2, 64);
  CHECK(bundle.paths.size() == 3);
  for (const auto& p : bundle.paths) CHECK(p.length() == 2);
}

TEST_CASE("path cap sets truncated only when more paths exist") {
  auto g = plain_graph(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
  auto sub = extract_subgraph(g, 0, 1, 1, 10, ExtractionMode::kInference, 0);
  CHECK_FALSE(enumerate_paths(sub, 2, 3).truncated);
  auto capped = enumerate_paths(sub, 2, 2);
  CHECK(capped.truncated);
  CHECK(capped.paths.size() == 2);
}

TEST_CASE("enumerate_paths matches the recursive oracle") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto g = oracle::random_graph(1000 + seed, 4 + seed % 16, 0.25);
    auto sub = extract_subgraph(g, 0, 1, 3, 100, ExtractionMode::kInference, seed);
    for (std::size_t len : {1, 2, 3, 4}) {
      auto bundle = enumerate_paths(sub, len, 1 << 20);
      std::set<std::vector<std::uint32_t>> got;
      for (const auto& p : bundle.paths) {
        got.insert(p.node_seq);
        REQUIRE(p.edge_seq.size() + 1 == p.node_seq.size());
        for (std::size_t k = 0; k + 1 < p.node_seq.size(); ++k) {
          CHECK(sub.has_edge(p.node_seq[k], p.node_seq[k + 1]));
          const auto* e = g.edge_attr(sub.local_ids[p.node_seq[k]],
                                      sub.local_ids[p.node_seq[k + 1]]);
          CHECK(*e == p.edge_seq[k]);
        }
      }
      CHECK(got.size() == bundle.paths.size());
      CHECK(got == oracle::all_simple_paths(sub, len));
    }
  }
}

TEST_CASE("build_dataset counts and labels") {
  auto g = plain_graph(4, {{0, 1}, {1, 2}});
  std::vector<std::pair<NodeId, NodeId>> pos{{0, 1}};
  auto ds = build_dataset(g, pos, 1.0, ExtractOptions{}, 1);
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].label == 1);
  CHECK(ds[1].label == 0);
  CHECK(ds[0].sub.mode == ExtractionMode::kTrainPositive);
  CHECK_FALSE(g.has_edge(ds[1].i, ds[1].j));
}

TEST_CASE("build_dataset errors") {
  auto g = plain_graph(4, {{0, 1}, {1, 2}});
  std::vector<std::pair<NodeId, NodeId>> bad{{0, 3}};
  CHECK_THROWS_AS(build_dataset(g, bad, 1.0, ExtractOptions{}, 1), PositiveNotAnEdge);
  auto complete = plain_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  std::vector<std::pair<NodeId, NodeId>> pos{{0, 1}};
  CHECK_THROWS_AS(build_dataset(complete, pos, 1.0, ExtractOptions{}, 1),
                  NegativeSamplingExhausted);
}

TEST_CASE("datasets are identical across runs and thread counts") {
  auto g = oracle::random_graph(77, 40, 0.15);
  std::vector<std::pair<NodeId, NodeId>> pos;
  for (std::uint32_t e = 0; e < g.edge_count(); e += 3) pos.push_back(g.edge_endpoints(e));
  ExtractOptions opts{.hops = 2, .max_neighbors = 3, .seed = 5};
  auto a = build_dataset(g, pos, 1.5, opts, 1);
  auto b = build_dataset(g, pos, 1.5, opts, 4);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() == pos.size() + static_cast<std::size_t>(std::ceil(1.5 * pos.size())));
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].i == b[k].i);
    CHECK(a[k].j == b[k].j);
    CHECK(a[k].label == b[k].label);
    CHECK(a[k].sub.local_ids == b[k].sub.local_ids);
    CHECK(a[k].bundle.paths.size() == b[k].bundle.paths.size());
  }
}

TEST_CASE("training positives never see their own edge") {
  auto g = oracle::random_graph(31, 40, 0.2);
  std::vector<std::pair<NodeId, NodeId>> pos;
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) pos.push_back(g.edge_endpoints(e));
  auto ds = build_dataset(g, pos, 1.0, ExtractOptions{.hops = 2, .max_neighbors = 5}, 2);
  for (const auto& ex : ds) {
    if (ex.label != 1) continue;
    CHECK_FALSE(ex.sub.has_edge(0, 1));
    for (const auto& p : ex.bundle.paths) CHECK(p.length() >= 2);
  }
}
