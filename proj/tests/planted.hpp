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

#include <vector>

#include "agcn/baselines.hpp"
#include "agcn/eval.hpp"
#include "agcn/extraction.hpp"
#include "agcn/model.hpp"
#include "agcn/training.hpp"

namespace agcn::testing {

struct PlantedSetup {
  SynthConfig synth;
  ExtractOptions extract{.hops = 1, .max_neighbors = 10, .max_path_length = 2, .max_paths = 64};
  std::size_t hidden = 16;
  std::size_t mlp_hidden = 16;
  std::size_t layers = 2;
  TrainConfig train{
      .epochs = 80, .batch_size = 32, .learning_rate = 5e-3, .early_stop_patience = 25};
};

struct PlantedOutcome {
  double agcn = 0;
  double concat = 0;
  double adamic_adar = 0;
  double common_neighbors = 0;
  double jaccard = 0;
  std::size_t test_pairs = 0;
  double single_path_fraction = 0;
};

inline double model_auc(const SynthResult& data, const std::vector<TrainingExample>& train_set,
                        const std::vector<TrainingExample>& test_set, ModelKind kind,
                        const PlantedSetup& setup, std::uint64_t seed) {
  auto config = ModelConfig::for_graph(data.graph, kind);
  config.hidden = setup.hidden;
  config.mlp_hidden = setup.mlp_hidden;
  config.layers = setup.layers;
  auto tc = setup.train;
  tc.seed = seed;
  auto result = train(train_set, ModelParams::initialize(config, seed), tc);
  const auto probs = predict(result.params, test_set, tc.threads);
  std::vector<int> labels;
  for (const auto& ex : test_set) labels.push_back(ex.label);
  return auc(probs, labels);
}

inline PlantedOutcome run_planted(PlantedSetup setup, std::uint64_t seed) {
  setup.synth.seed = seed;
  setup.extract.seed = seed;
  const auto data = generate_synthetic(setup.synth);
  const auto train_set =
      build_labeled_dataset(data.graph, data.train_pairs, setup.extract, setup.train.threads);
  const auto test_set =
      build_labeled_dataset(data.graph, data.test_pairs, setup.extract, setup.train.threads);

  PlantedOutcome out;
  out.test_pairs = test_set.size();
  out.single_path_fraction = path_stats(test_set, 1).overall.fraction_at_most_k;
  out.agcn = model_auc(data, train_set, test_set, ModelKind::kAgcn, setup, seed);
  out.concat = model_auc(data, train_set, test_set, ModelKind::kConcat, setup, seed);
  std::vector<double> aa, cn, jc;
  std::vector<int> labels;
  for (const auto& p : data.test_pairs) {
    aa.push_back(adamic_adar_score(data.graph, p.i, p.j));
    cn.push_back(static_cast<double>(common_neighbors_score(data.graph, p.i, p.j)));
    jc.push_back(jaccard_coefficient(data.graph, p.i, p.j));
    labels.push_back(p.label);
  }
  out.adamic_adar = auc(aa, labels);
  out.common_neighbors = auc(cn, labels);
  out.jaccard = auc(jc, labels);
  return out;
}

}  // namespace agcn::testing
