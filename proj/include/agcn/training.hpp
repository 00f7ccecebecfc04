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
#include <string>
#include <vector>

#include "agcn/extraction.hpp"
#include "agcn/model.hpp"

namespace agcn {

enum class OptimizerKind { kSgd, kAdam };

OptimizerKind parse_optimizer(std::string_view name);

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  /// 0 is accepted and leaves parameters untouched.
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double l2_weight = 0.0;
  std::uint64_t seed = 0;
  double neg_ratio = 1.0;
  /// Epochs without validation AUC improvement before stopping; 0 disables.
  std::size_t early_stop_patience = 0;
  double validation_fraction = 0.1;
  unsigned threads = 1;

  void validate() const;
};

struct EpochTrace {
  std::size_t epoch = 0;
  double loss = 0;
  /// NaN when the validation split is empty or single-class.
  double val_auc = 0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochTrace> trace;
  double first_batch_loss = 0;
  /// Epoch whose parameters were returned.
  std::size_t best_epoch = 0;
};

/// Per-example term of the cross-entropy objective with the probability
/// clamped to [eps, 1 - eps].
double bce_loss(double prob, int label, double eps = 1e-12);
double mean_bce_loss(std::span<const double> probs, std::span<const int> labels,
                     double eps = 1e-12);

/// Loss of one example; overwrites `grads` with d(loss)/d(tensor) per tensor.
double example_loss_and_gradient(const ModelParams& params, const TrainingExample& example,
                                 std::vector<Matrix>& grads);

class Optimizer {
 public:
  explicit Optimizer(const TrainConfig& config) : config_(config) {}

  /// Applies one update with the already-averaged gradient (l2 term added here).
  void step(ModelParams& params, const std::vector<Matrix>& grads);

 private:
  TrainConfig config_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::size_t t_ = 0;
};

/// One mini-batch update; returns the mean batch loss before the update.
/// Per-example gradients may be computed in parallel; they are reduced in
/// batch order so the result is independent of the thread count.
double train_step(ModelParams& params, std::span<const TrainingExample* const> batch,
                  Optimizer& optimizer, unsigned threads = 1);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Label-stratified split: floor(fraction * count) of each label goes to validation.
Split stratified_split(std::span<const TrainingExample> dataset, double fraction,
                       std::uint64_t seed);

/// Mini-batch training on the clamped cross-entropy objective.
/// Throws SingleClassDataset if only one label occurs, DivergedLoss on NaN.
TrainResult train(std::span<const TrainingExample> dataset, ModelParams params,
                  const TrainConfig& config);

std::vector<double> predict(const ModelParams& params, std::span<const TrainingExample> examples,
                            unsigned threads = 1);

}  // namespace agcn
