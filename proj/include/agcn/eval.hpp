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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "agcn/extraction.hpp"
#include "agcn/graph.hpp"

namespace agcn {

struct ScoredPair {
  NodeId i = 0;
  NodeId j = 0;
  double score = 0;
  int label = 0;
};

/// Probability that a random positive outranks a random negative, ties
/// counting one half. Rank-sum formulation, O(n log n).
/// Throws SingleClassInput unless both labels occur.
double auc(std::span<const ScoredPair> pairs);
double auc(std::span<const double> scores, std::span<const int> labels);

struct LabelPathStats {
  std::size_t examples = 0;
  double mean_paths = 0;
  /// Mean length over all paths of this label (0 if none).
  double mean_path_length = 0;
  /// Fraction of examples with at most k paths.
  double fraction_at_most_k = 0;
  std::size_t truncated = 0;
};

struct PathStats {
  std::size_t k = 1;
  LabelPathStats negative;
  LabelPathStats positive;
  LabelPathStats overall;
  /// path length -> number of paths, all labels.
  std::map<std::size_t, std::size_t> length_histogram;
  /// path count -> number of examples, all labels.
  std::map<std::size_t, std::size_t> count_histogram;
};

PathStats path_stats(std::span<const TrainingExample> dataset, std::size_t k = 1);

/// Tab-separated rendering: per-label table, then both histograms.
std::string format_path_stats(const PathStats& stats);

struct RateRow {
  /// Agreement bit per selected group, in the order given.
  std::vector<bool> pattern;
  std::size_t count = 0;
  double rate = 0;
  /// 95% Wilson interval (meaningful when values are 0/1).
  double ci_low = 0;
  double ci_high = 0;
};

/// Among examples whose bundle holds exactly one path, buckets by that path's
/// agreement bits over `groups` and averages `values` (labels or
/// predictions, parallel to dataset) per bucket. Empty buckets are omitted.
/// Rows are sorted by pattern.
std::vector<RateRow> attribute_rate_table(std::span<const TrainingExample> dataset,
                                          std::span<const double> values,
                                          std::span<const std::size_t> groups);

std::string format_rate_table(std::span<const RateRow> rows, const AttrGroupSchema& schema,
                              std::span<const std::size_t> groups);

/// Desk-scale planted-signal generator: a bipartite user-item click graph
/// where each labeled item-item pair (i, j) is joined through a planted user
/// u. The edges (u, i) and (u, j) agree on the signal group with probability
/// 1/2; an agreeing pair is positive with probability signal_strength, and
/// any pair not made positive that way is positive with probability
/// noise_rate. A fraction of pairs get one more connecting user with random
/// attributes, and background clicks fill the graph up to n_edges.
struct SynthConfig {
  std::size_t n_users = 1000;
  std::size_t n_items = 2000;
  std::size_t n_edges = 15000;
  std::size_t n_train_pairs = 2000;
  std::size_t n_test_pairs = 2000;
  AttrGroupSchema schema = default_schema();
  std::size_t signal_group = 2;
  double signal_strength = 0.9;
  double noise_rate = 0.05;
  /// Probability that a pair gets extra connecting users (1..max_extra_paths,
  /// uniform) with random attributes.
  double extra_path_rate = 0.22;
  std::size_t max_extra_paths = 5;
  /// Probability that a non-signal attribute is missing.
  double missing_rate = 0.1;
  std::uint64_t seed = 0;

  static AttrGroupSchema default_schema();
  void validate() const;
};

struct PlantedPair {
  NodeId i = 0;
  NodeId j = 0;
  NodeId user = 0;
  bool agree = false;
  int label = 0;
  bool test = false;
  std::size_t extra_paths = 0;
};

struct SynthResult {
  AttributedGraph graph;
  std::vector<LabeledPair> train_pairs;
  std::vector<LabeledPair> test_pairs;
  std::vector<PlantedPair> truth;
};

/// Node ids: users 0 .. n_users-1, items n_users .. n_users+n_items-1. Users
/// carry attribute {0: 1}, items {1: 1}. Deterministic under cfg.seed.
/// Throws InfeasibleConfig when the sizes cannot be realized.
SynthResult generate_synthetic(const SynthConfig& cfg);

}  // namespace agcn
