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

// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "agcn/baselines.hpp"
#include "agcn/eval.hpp"
#include "agcn/extraction.hpp"
#include "agcn/model.hpp"
#include "agcn/training.hpp"
#include "cli_runner.hpp"
#include "oracles.hpp"
#include "planted.hpp"

using namespace agcn;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::size_t max_degree(const AttributedGraph& g) {
  std::size_t m = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) m = std::max(m, g.degree(v));
  return m;
}

Verdict gradients() {
  const auto start = Clock::now();
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::bernoulli_distribution coin(0.6);
    const auto schema = oracle::small_schema();
    Matrix nodes(5, 3);
    for (auto& x : nodes.data()) x = u(gen);
    std::vector<Subgraph::Edge> edges;
    for (std::uint32_t a = 0; a < 5; ++a)
      for (std::uint32_t b = a + 1; b < 5; ++b)
        if (coin(gen)) edges.push_back({a, b, oracle::random_attr(gen, schema)});
    TrainingExample ex;
    ex.sub = make_subgraph({0, 1, 2, 3, 4}, nodes, edges);
    ex.bundle = enumerate_paths(ex.sub, 3, 64);
    ex.label = static_cast<int>(seed % 2);

    ModelConfig c;
    c.input_dim = 3;
    c.group_cardinalities = {3, 2, 4};
    c.hidden = 4;
    c.mlp_hidden = 5;
    c.symmetric_readout = seed % 2 == 1;
    auto p = ModelParams::initialize(c, seed);
    oracle::randomize(p, seed);
    std::vector<Matrix> grads;
    example_loss_and_gradient(p, ex, grads);
    for (std::size_t k = 0; k < p.tensors.size(); ++k)
      for (std::size_t e = 0; e < p.tensors[k].size(); ++e) {
        auto q = p;
        q.tensors[k].data()[e] += 1e-5;
        const double up = oracle::forward_loss(q, ex);
        q.tensors[k].data()[e] -= 2e-5;
        const double numeric = (up - oracle::forward_loss(q, ex)) / 2e-5;
        worst = std::max(worst, oracle::relative_error(grads[k].data()[e], numeric));
      }
  }
  const double t = seconds_since(start);
  return {worst < 1e-4 && t < 30, fmt("max relative error %.3g (< 1e-4), %.2f s (< 30 s)", worst, t)};
}

Verdict extraction() {
  const auto start = Clock::now();
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto g = oracle::random_graph(seed, 2 + seed % 49, 0.1);
    const NodeId i = static_cast<NodeId>(seed % g.node_count());
    NodeId j = static_cast<NodeId>((seed * 7 + 1) % g.node_count());
    if (j == i) j = (i + 1) % g.node_count();
    const std::size_t h = 1 + seed % 3;
    const auto mode = seed % 2 ? ExtractionMode::kTrainPositive : ExtractionMode::kInference;
    auto sub = extract_subgraph(g, i, j, h, std::max<std::size_t>(1, max_degree(g)), mode, seed);
    auto want = oracle::enclosing_subgraph(g, i, j, h, mode == ExtractionMode::kTrainPositive);
    auto got = oracle::as_global(sub);
    mismatches += got.nodes != want.nodes || got.edges != want.edges ||
                  sub.local_ids[0] != i || sub.local_ids[1] != j;
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 10, fmt("%zu/500 mismatches, %.2f s (< 10 s)", mismatches, t)};
}

Verdict paths() {
  std::size_t mismatches = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t n = 2 + seed % 19;
    auto g = oracle::random_graph(50000 + seed, n, 0.2);
    auto sub = extract_subgraph(g, 0, 1, n, n, ExtractionMode::kInference, seed);
    const std::size_t len = n;
    auto bundle = enumerate_paths(sub, len, std::size_t(1) << 30);
    std::set<std::vector<std::uint32_t>> got;
    for (const auto& p : bundle.paths) got.insert(p.node_seq);
    total += got.size();
    mismatches += got.size() != bundle.paths.size() || got != oracle::all_simple_paths(sub, len);
  }
  return {mismatches == 0, fmt("%zu/1000 mismatches over %zu paths", mismatches, total)};
}

Verdict encoding() {
  std::mt19937_64 gen(4);
  const auto schema = oracle::small_schema();
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    PathRecord p;
    const int len = 1 + t % 5;
    p.node_seq.push_back(0);
    for (int k = 0; k < len; ++k) {
      p.edge_seq.push_back(oracle::random_attr(gen, schema, 0.15));
      p.node_seq.push_back(static_cast<std::uint32_t>(k + 2));
    }
    p.node_seq.back() = 1;
    auto got = encode_path(p, schema);
    mismatches += std::vector<double>(got.begin(), got.end()) != oracle::dense_path_encoding(p, schema);
  }
  return {mismatches == 0, fmt("%zu/1000 mismatches", mismatches)};
}

Verdict heuristics() {
  std::size_t cn_bad = 0, pairs = 0;
  double aa_worst = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto g = oracle::random_graph(90000 + seed, 5 + seed % 40, 0.15);
    for (NodeId i = 0; i < g.node_count(); ++i)
      for (NodeId j = i + 1; j < g.node_count(); ++j) {
        ++pairs;
        cn_bad += common_neighbors_score(g, i, j) != oracle::common_neighbors(g, i, j);
        aa_worst = std::max(aa_worst, std::abs(adamic_adar_score(g, i, j) -
                                               oracle::adamic_adar(g, i, j, kAdamicAdarDegreeOneWeight)));
      }
  }
  return {cn_bad == 0 && aa_worst <= 1e-12,
          fmt("%zu pairs, CN mismatches %zu, AA max error %.3g (<= 1e-12)", pairs, cn_bad, aa_worst)};
}

Verdict auc_oracle() {
  std::mt19937_64 gen(6);
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + gen() % 300;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = t % 2 ? static_cast<double>(gen() % 10) : std::normal_distribution<double>()(gen);
      y[k] = static_cast<int>(gen() % 2);
    }
    y[0] = 0;
    y[1] = 1;
    worst = std::max(worst, std::abs(auc(s, y) - oracle::pairwise_auc(s, y)));
  }
  std::size_t changed = 0;
  std::vector<double> s(500);
  std::vector<int> y(500);
  for (std::size_t k = 0; k < 500; ++k) {
    s[k] = std::normal_distribution<double>()(gen);
    y[k] = static_cast<int>(gen() % 2);
  }
  const double base = auc(s, y);
  std::uniform_real_distribution<double> coef(0.1, 3);
  for (int t = 0; t < 50; ++t) {
    const double a = coef(gen), b = coef(gen), c = coef(gen) - 1.5;
    std::vector<double> mapped(s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
      mapped[k] = t % 2 ? a * s[k] + c : std::exp(a * s[k]) + b * std::atan(s[k]) + c;
    changed += auc(mapped, y) != base;
  }
  return {worst <= 1e-12 && changed == 0,
          fmt("max |rank-sum - pairwise| %.3g (<= 1e-12), %zu/50 transforms changed AUC", worst,
              changed)};
}

testing::PlantedSetup single_core_setup() {
  testing::PlantedSetup setup;
  setup.train.threads = 1;
  return setup;
}

Verdict planted() {
  const auto start = Clock::now();
  const auto setup = single_core_setup();
  double agcn = 0, concat = 0, aa = 0, cn = 0, single = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = testing::run_planted(setup, seed);
    std::printf("  seed %llu: agcn %.4f concat %.4f adamic_adar %.4f common_neighbors %.4f "
                "single_path %.3f\n",
                static_cast<unsigned long long>(seed), r.agcn, r.concat, r.adamic_adar,
                r.common_neighbors, r.single_path_fraction);
    std::fflush(stdout);
    agcn += r.agcn / 5;
    concat += r.concat / 5;
    aa += r.adamic_adar / 5;
    cn += r.common_neighbors / 5;
    single += r.single_path_fraction / 5;
  }
  const double t = seconds_since(start);
  const bool pass = agcn >= concat + 0.05 && concat >= aa + 0.10 && agcn >= 0.85 &&
                    std::abs(aa - 0.5) <= 0.05 && std::abs(cn - 0.5) <= 0.05 && t < 300;
  return {pass, fmt("5-seed means: agcn %.4f, concat %.4f, adamic_adar %.4f, common_neighbors "
                    "%.4f, single_path %.3f; %.1f s (< 300 s)",
                    agcn, concat, aa, cn, single, t)};
}

Verdict null_signal() {
  auto setup = single_core_setup();
  setup.synth.signal_strength = 0.0;
  setup.synth.noise_rate = 0.5;
  const auto r = testing::run_planted(setup, 11);
  bool pass = r.test_pairs == 2000;
  for (double a : {r.agcn, r.concat, r.adamic_adar, r.common_neighbors, r.jaccard})
    pass = pass && a >= 0.45 && a <= 0.55;
  return {pass, fmt("%zu test pairs: agcn %.4f concat %.4f adamic_adar %.4f common_neighbors "
                    "%.4f jaccard %.4f (all in [0.45, 0.55])",
                    r.test_pairs, r.agcn, r.concat, r.adamic_adar, r.common_neighbors, r.jaccard)};
}

Verdict determinism() {
  namespace fs = std::filesystem;
  clitest::Scratch s("acceptance");
  const std::string bin = AGCN_CLI_PATH;
  const std::string extract = " --hops 1 --cap 10 --max-path-length 2 --seed 7";
  std::vector<std::vector<std::string>> artifacts;
  std::string failure;
  for (const char* threads : {"1", "4"}) {
    const auto dir = s.path(std::string("run") + threads);
    const auto data = "'" + dir + "/data'";
    const std::string t = std::string(" --threads ") + threads;
    auto a = clitest::run(bin, "synth --out " + data + " --seed 7 --users 400 --items 800 "
                               "--edges 3000 --train-pairs 400 --test-pairs 400", s);
    auto b = clitest::run(bin, "train --graph " + data + " --pairs " + data +
                                   "/train_pairs.tsv --out '" + dir + "/model.ckpt' --trace '" +
                                   dir + "/trace.csv' --epochs 4 --hidden 8 --mlp-hidden 8" +
                                   extract + t, s);
    auto c = clitest::run(bin, "eval --graph " + data + " --pairs " + data +
                                   "/test_pairs.tsv --checkpoint '" + dir + "/model.ckpt' --scores '" +
                                   dir + "/scores.csv'" + extract + t, s);
    for (const auto* r : {&a, &b, &c})
      if (r->code != 0) failure = "pipeline step exited " + std::to_string(r->code) + ": " + r->err;
    artifacts.push_back({clitest::slurp(dir + "/model.ckpt"), clitest::slurp(dir + "/trace.csv"),
                         c.out, clitest::slurp(dir + "/scores.csv"),
                         clitest::slurp(dir + "/data/edges.tsv")});
  }
  if (!failure.empty()) return {false, failure};
  const bool same = artifacts[0] == artifacts[1] && !artifacts[0][0].empty();
  auto auc_line = artifacts[0][2];
  if (!auc_line.empty() && auc_line.back() == '\n') auc_line.pop_back();
  return {same, fmt("threads 1 vs 4: checkpoint %zu bytes, trace, metric (%s), scores %s",
                    artifacts[0][0].size(), auc_line.c_str(),
                    same ? "byte-identical" : "differ")};
}

Verdict leakage() {
  SynthConfig cfg;
  cfg.seed = 3;
  const auto data = generate_synthetic(cfg);
  std::vector<std::pair<NodeId, NodeId>> positives;
  for (std::uint32_t e = 0; e < data.graph.edge_count(); e += 3)
    positives.push_back(data.graph.edge_endpoints(e));
  const auto ds = build_dataset(data.graph, positives, 1.0,
                                ExtractOptions{.hops = 2, .max_neighbors = 20, .seed = 3});
  std::size_t checked = 0, with_target = 0, length_one = 0;
  for (const auto& ex : ds) {
    if (ex.label != 1) continue;
    ++checked;
    with_target += ex.sub.has_edge(0, 1) || ex.sub.mode != ExtractionMode::kTrainPositive;
    for (const auto& p : ex.bundle.paths) length_one += p.length() == 1;
  }
  for (const auto& ex : ds)
    for (const auto& p : ex.bundle.paths) length_one += ex.label == 1 ? 0 : p.length() == 1;
  return {checked == positives.size() && with_target == 0 && length_one == 0,
          fmt("%zu train-positive subgraphs: %zu contain their target edge, %zu length-1 paths "
              "in training bundles",
              checked, with_target, length_one)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"gradient correctness", gradients},
      {"enclosing subgraph extraction", extraction},
      {"path enumeration", paths},
      {"path encoding", encoding},
      {"heuristic oracles", heuristics},
      {"AUC oracle", auc_oracle},
      {"planted-signal ordering", planted},
      {"null-signal calibration", null_signal},
      {"pipeline determinism", determinism},
      {"leakage guard", leakage},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %zu %s: %s - %s\n", k + 1, v.pass ? "PASS" : "FAIL", criteria[k].first,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
