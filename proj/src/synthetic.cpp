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

#include <unordered_set>

#include "agcn/eval.hpp"
#include "agcn/random.hpp"

namespace agcn {

AttrGroupSchema SynthConfig::default_schema() {
  return AttrGroupSchema({{"time", 4}, {"scenario", 3}, {"trigger", 6}, {"query", 8}});
}

void SynthConfig::validate() const {
  auto prob = [](double p) { return p >= 0 && p <= 1; };
  if (n_users < 2 || n_items < 2) throw InfeasibleConfig("need at least 2 users and 2 items");
  if (n_train_pairs + n_test_pairs == 0) throw InfeasibleConfig("no pairs requested");
  if (signal_group >= schema.group_count())
    throw InfeasibleConfig("signal_group " + std::to_string(signal_group) + " out of range");
  if (schema.group(signal_group).cardinality < 2)
    throw InfeasibleConfig("signal group needs cardinality >= 2 to plant disagreement");
  if (!prob(signal_strength) || !prob(noise_rate) || !prob(extra_path_rate) ||
      !prob(missing_rate))
    throw InfeasibleConfig("probabilities must lie in [0, 1]");
  const double max_edges = double(n_users) * double(n_items);
  if (double(n_edges) > 0.5 * max_edges)
    throw InfeasibleConfig("n_edges exceeds half of the possible user-item pairs");
  const double max_pairs = 0.5 * double(n_items) * double(n_items - 1);
  if (double(n_train_pairs + n_test_pairs) > 0.5 * max_pairs)
    throw InfeasibleConfig("too many item pairs for n_items");
}

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

class Builder {
 public:
  Builder(const SynthConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {}

  NodeId random_user() { return static_cast<NodeId>(rng_.below(cfg_.n_users)); }
  NodeId random_item() {
    return static_cast<NodeId>(cfg_.n_users + rng_.below(cfg_.n_items));
  }
  bool has(NodeId u, NodeId item) const { return existing_.contains(pair_key(u, item)); }

  EdgeAttr random_attr() {
    EdgeAttr a;
    const auto& schema = cfg_.schema;
    a.values.resize(schema.group_count());
    for (std::size_t g = 0; g < schema.group_count(); ++g) {
      const bool drop = rng_.bernoulli(cfg_.missing_rate);
      const auto v = static_cast<std::int32_t>(rng_.below(schema.group(g).cardinality));
      a.values[g] = (drop && g != cfg_.signal_group) ? EdgeAttr::kMissing : v;
    }
    return a;
  }

  void add(NodeId u, NodeId item, EdgeAttr attr) {
    existing_.insert(pair_key(u, item));
    edges_.push_back({u, item, std::move(attr)});
  }

  /// A user adjacent to neither item, or nullopt after bounded retries.
  std::optional<NodeId> free_user(NodeId i, NodeId j) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const NodeId u = random_user();
      if (!has(u, i) && !has(u, j)) return u;
    }
    return std::nullopt;
  }

  std::vector<EdgeInput> take_edges() { return std::move(edges_); }
  std::size_t edge_count() const { return edges_.size(); }

 private:
  const SynthConfig& cfg_;
  Rng& rng_;
  std::unordered_set<std::uint64_t> existing_;
  std::vector<EdgeInput> edges_;
};

}  // namespace

SynthResult generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(mix_seed(cfg.seed, 0x73796e7468ULL));
  Builder b(cfg, rng);
  SynthResult out;

  const std::size_t n_pairs = cfg.n_train_pairs + cfg.n_test_pairs;
  const auto sig = cfg.signal_group;
  const auto card = cfg.schema.group(sig).cardinality;
  std::unordered_set<std::uint64_t> used_pairs;

  for (std::size_t p = 0; p < n_pairs; ++p) {
    PlantedPair planted;
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      const NodeId i = b.random_item(), j = b.random_item();
      if (i == j || used_pairs.contains(pair_key(i, j))) continue;
      auto u = b.free_user(i, j);
      if (!u) continue;
      planted.i = std::min(i, j);
      planted.j = std::max(i, j);
      planted.user = *u;
      placed = true;
    }
    if (!placed) throw InfeasibleConfig("could not place item pair " + std::to_string(p));
    used_pairs.insert(pair_key(planted.i, planted.j));

    planted.agree = rng.bernoulli(0.5);
    EdgeAttr first = b.random_attr();
    EdgeAttr second = b.random_attr();
    if (planted.agree)
      second.values[sig] = first.values[sig];
    else
      second.values[sig] =
          static_cast<std::int32_t>((first.values[sig] + 1 + rng.below(card - 1)) % card);
    const bool strong = rng.uniform() < cfg.signal_strength;
    const bool noisy = rng.uniform() < cfg.noise_rate;
    planted.label = (planted.agree && strong) || noisy ? 1 : 0;
    b.add(planted.user, planted.i, std::move(first));
    b.add(planted.user, planted.j, std::move(second));

    if (cfg.max_extra_paths > 0 && rng.bernoulli(cfg.extra_path_rate)) {
      const auto extra = 1 + rng.below(cfg.max_extra_paths);
      for (std::size_t k = 0; k < extra; ++k) {
        auto w = b.free_user(planted.i, planted.j);
        if (!w) break;
        b.add(*w, planted.i, b.random_attr());
        b.add(*w, planted.j, b.random_attr());
        ++planted.extra_paths;
      }
    }
    planted.test = p >= cfg.n_train_pairs;
    (planted.test ? out.test_pairs : out.train_pairs)
        .push_back({planted.i, planted.j, planted.label});
    out.truth.push_back(planted);
  }

  if (b.edge_count() > cfg.n_edges)
    throw InfeasibleConfig("planted pairs need " + std::to_string(b.edge_count()) +
                           " edges, more than n_edges = " + std::to_string(cfg.n_edges));
  std::size_t budget = 100 * cfg.n_edges + 1000;
  while (b.edge_count() < cfg.n_edges) {
    if (budget-- == 0) throw InfeasibleConfig("could not place background edges");
    const NodeId u = b.random_user(), item = b.random_item();
    if (b.has(u, item)) continue;
    b.add(u, item, b.random_attr());
  }

  std::vector<NodeAttr> nodes(cfg.n_users + cfg.n_items);
  for (std::size_t v = 0; v < nodes.size(); ++v)
    nodes[v].entries = {{v < cfg.n_users ? 0u : 1u, 1.0}};
  out.graph = build_graph(std::move(nodes), b.take_edges(), cfg.schema, std::size_t{2});
  return out;
}

}  // namespace agcn
