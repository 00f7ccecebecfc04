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

#include "agcn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "agcn/model.hpp"

namespace agcn {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ShapeMismatch("scores/labels length mismatch");
  std::size_t n_pos = 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (!std::isfinite(scores[k])) throw DataError("non-finite score at row " + std::to_string(k));
    if (labels[k] == 1) ++n_pos;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw SingleClassInput("AUC needs both positive and negative examples");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of (1-based, tie-averaged) ranks of the positives.
  long double rank_sum = 0;
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    std::size_t pos_in_run = 0;
    while (hi < order.size() && scores[order[hi]] == scores[order[lo]]) {
      if (labels[order[hi]] == 1) ++pos_in_run;
      ++hi;
    }
    const long double avg_rank = (static_cast<long double>(lo + 1) + hi) / 2;
    rank_sum += avg_rank * pos_in_run;
    lo = hi;
  }
  const long double np = n_pos, nn = n_neg;
  return static_cast<double>((rank_sum - np * (np + 1) / 2) / (np * nn));
}

double auc(std::span<const ScoredPair> pairs) {
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(pairs.size());
  labels.reserve(pairs.size());
  for (const auto& p : pairs) {
    scores.push_back(p.score);
    labels.push_back(p.label);
  }
  return auc(scores, labels);
}

PathStats path_stats(std::span<const TrainingExample> dataset, std::size_t k) {
  PathStats stats;
  stats.k = k;
  struct Acc {
    std::size_t examples = 0, paths = 0, length = 0, at_most_k = 0, truncated = 0;
  } acc[3];
  for (const auto& ex : dataset) {
    const std::size_t count = ex.bundle.paths.size();
    std::size_t length = 0;
    for (const auto& p : ex.bundle.paths) {
      length += p.length();
      ++stats.length_histogram[p.length()];
    }
    ++stats.count_histogram[count];
    for (Acc* a : {&acc[ex.label == 1 ? 1 : 0], &acc[2]}) {
      ++a->examples;
      a->paths += count;
      a->length += length;
      a->at_most_k += count <= k ? 1 : 0;
      a->truncated += ex.bundle.truncated ? 1 : 0;
    }
  }
  auto finish = [](const Acc& a) {
    LabelPathStats s;
    s.examples = a.examples;
    s.truncated = a.truncated;
    if (a.examples) {
      s.mean_paths = double(a.paths) / double(a.examples);
      s.fraction_at_most_k = double(a.at_most_k) / double(a.examples);
    }
    if (a.paths) s.mean_path_length = double(a.length) / double(a.paths);
    return s;
  };
  stats.negative = finish(acc[0]);
  stats.positive = finish(acc[1]);
  stats.overall = finish(acc[2]);
  return stats;
}

std::string format_path_stats(const PathStats& stats) {
  std::ostringstream out;
  out.precision(6);
  out << "set\texamples\tmean_paths\tmean_path_length\tfrac_paths_le_" << stats.k
      << "\ttruncated\n";
  auto row = [&](const char* name, const LabelPathStats& s) {
    out << name << '\t' << s.examples << '\t' << s.mean_paths << '\t' << s.mean_path_length
        << '\t' << s.fraction_at_most_k << '\t' << s.truncated << '\n';
  };
  row("positive", stats.positive);
  row("negative", stats.negative);
  row("all", stats.overall);
  out << "\npath_length\tpaths\n";
  for (auto [len, n] : stats.length_histogram) out << len << '\t' << n << '\n';
  out << "\npath_count\texamples\n";
  for (auto [c, n] : stats.count_histogram) out << c << '\t' << n << '\n';
  return out.str();
}

namespace {

void wilson_interval(double successes, double n, double& lo, double& hi) {
  constexpr double z = 1.959963984540054;
  if (n <= 0) {
    lo = 0;
    hi = 1;
    return;
  }
  const double p = successes / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  lo = std::max(0.0, centre - half);
  hi = std::min(1.0, centre + half);
}

}  // namespace

std::vector<RateRow> attribute_rate_table(std::span<const TrainingExample> dataset,
                                          std::span<const double> values,
                                          std::span<const std::size_t> groups) {
  if (values.size() != dataset.size()) throw ShapeMismatch("values must parallel the dataset");
  std::map<std::vector<bool>, std::pair<std::size_t, double>> buckets;
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    const auto& bundle = dataset[k].bundle;
    if (bundle.paths.size() != 1) continue;
    const auto& path = bundle.paths.front();
    if (path.edge_seq.empty()) continue;
    const auto bits = encode_path(path, path.edge_seq.front().values.size());
    std::vector<bool> pattern;
    for (auto g : groups) {
      if (g >= bits.size()) throw SchemaMismatch("group index out of range");
      pattern.push_back(bits[g] > 0);
    }
    auto& b = buckets[pattern];
    ++b.first;
    b.second += values[k];
  }
  std::vector<RateRow> rows;
  for (const auto& [pattern, acc] : buckets) {
    RateRow r;
    r.pattern = pattern;
    r.count = acc.first;
    r.rate = acc.second / double(acc.first);
    wilson_interval(acc.second, double(acc.first), r.ci_low, r.ci_high);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_rate_table(std::span<const RateRow> rows, const AttrGroupSchema& schema,
                              std::span<const std::size_t> groups) {
  std::ostringstream out;
  out.precision(6);
  for (auto g : groups) out << "same_" << schema.group(g).name << '\t';
  out << "count\trate\tci_low\tci_high\n";
  for (const auto& r : rows) {
    for (bool b : r.pattern) out << (b ? 1 : 0) << '\t';
    out << r.count << '\t' << r.rate << '\t' << r.ci_low << '\t' << r.ci_high << '\n';
  }
  return out.str();
}

}  // namespace agcn
