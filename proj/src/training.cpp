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

#include "agcn/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "agcn/eval.hpp"
#include "agcn/parallel.hpp"
#include "agcn/random.hpp"

namespace agcn {

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw DataError("unknown optimizer '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0) || !std::isfinite(learning_rate))
    throw DataError("learning_rate must be a finite non-negative number");
  if (batch_size < 1) throw DataError("batch_size must be at least 1");
  if (!(l2_weight >= 0)) throw DataError("l2_weight must be non-negative");
  if (!(validation_fraction >= 0 && validation_fraction < 1))
    throw DataError("validation_fraction must lie in [0, 1)");
  if (optimizer == OptimizerKind::kAdam &&
      !(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && adam_epsilon > 0))
    throw DataError("invalid Adam hyperparameters");
}

double bce_loss(double prob, int label, double eps) {
  const double p = std::clamp(prob, eps, 1.0 - eps);
  return label ? -std::log(p) : -std::log(1.0 - p);
}

double mean_bce_loss(std::span<const double> probs, std::span<const int> labels, double eps) {
  if (probs.size() != labels.size()) throw ShapeMismatch("probs/labels length mismatch");
  if (probs.empty()) return 0;
  double total = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) total += bce_loss(probs[k], labels[k], eps);
  return total / static_cast<double>(probs.size());
}

double example_loss_and_gradient(const ModelParams& params, const TrainingExample& example,
                                 std::vector<Matrix>& grads) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(params.tensors.size());
  for (const auto& t : params.tensors) vars.push_back(tape.parameter(t));
  Var logit = record_logit(tape, params, vars, example.sub, example.bundle);
  Var loss = tape.bce(tape.sigmoid(logit), example.label);
  tape.backward(loss);
  grads.resize(vars.size());
  for (std::size_t k = 0; k < vars.size(); ++k) grads[k] = tape.grad(vars[k]);
  return static_cast<double>(tape.value(loss)(0, 0));
}

void Optimizer::step(ModelParams& params, const std::vector<Matrix>& grads) {
  const auto lr = static_cast<Scalar>(config_.learning_rate);
  const auto l2 = static_cast<Scalar>(config_.l2_weight);
  if (config_.optimizer == OptimizerKind::kSgd) {
    for (std::size_t k = 0; k < params.tensors.size(); ++k) {
      auto& w = params.tensors[k].data();
      const auto& g = grads[k].data();
      for (std::size_t e = 0; e < w.size(); ++e) w[e] -= lr * (g[e] + l2 * w[e]);
    }
    return;
  }
  if (m_.empty()) {
    for (const auto& t : params.tensors) {
      m_.emplace_back(t.rows(), t.cols());
      v_.emplace_back(t.rows(), t.cols());
    }
  }
  ++t_;
  const auto b1 = static_cast<Scalar>(config_.beta1);
  const auto b2 = static_cast<Scalar>(config_.beta2);
  const auto eps = static_cast<Scalar>(config_.adam_epsilon);
  const Scalar c1 = Scalar(1) - static_cast<Scalar>(std::pow(config_.beta1, double(t_)));
  const Scalar c2 = Scalar(1) - static_cast<Scalar>(std::pow(config_.beta2, double(t_)));
  for (std::size_t k = 0; k < params.tensors.size(); ++k) {
    auto& w = params.tensors[k].data();
    const auto& g = grads[k].data();
    auto& m = m_[k].data();
    auto& v = v_[k].data();
    for (std::size_t e = 0; e < w.size(); ++e) {
      const Scalar ge = g[e] + l2 * w[e];
      m[e] = b1 * m[e] + (Scalar(1) - b1) * ge;
      v[e] = b2 * v[e] + (Scalar(1) - b2) * ge * ge;
      w[e] -= lr * (m[e] / c1) / (std::sqrt(v[e] / c2) + eps);
    }
  }
}

double train_step(ModelParams& params, std::span<const TrainingExample* const> batch,
                  Optimizer& optimizer, unsigned threads) {
  if (batch.empty()) return 0;
  std::vector<std::vector<Matrix>> per_example(batch.size());
  std::vector<double> losses(batch.size());
  parallel_for(batch.size(), threads, [&](std::size_t k) {
    losses[k] = example_loss_and_gradient(params, *batch[k], per_example[k]);
  });

  std::vector<Matrix> total = std::move(per_example[0]);
  for (std::size_t k = 1; k < batch.size(); ++k)
    for (std::size_t t = 0; t < total.size(); ++t) {
      auto& dst = total[t].data();
      const auto& src = per_example[k][t].data();
      for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += src[e];
    }
  const Scalar inv = Scalar(1) / static_cast<Scalar>(batch.size());
  for (auto& t : total)
    for (auto& x : t.data()) x *= inv;

  double loss = 0;
  for (double l : losses) loss += l;
  loss /= static_cast<double>(batch.size());
  if (!std::isfinite(loss)) throw NumericalError("non-finite batch loss");
  for (const auto& t : total) t.require_finite("gradient");

  optimizer.step(params, total);
  return loss;
}

Split stratified_split(std::span<const TrainingExample> dataset, double fraction,
                       std::uint64_t seed) {
  Split split;
  Rng rng(mix_seed(seed, 0x73706c6974ULL));
  for (int label : {0, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < dataset.size(); ++k)
      if (dataset[k].label == label) idx.push_back(k);
    for (std::size_t k = idx.size(); k > 1; --k) std::swap(idx[k - 1], idx[rng.below(k)]);
    const auto n_val = static_cast<std::size_t>(std::floor(fraction * double(idx.size())));
    split.validation.insert(split.validation.end(), idx.begin(), idx.begin() + n_val);
    split.train.insert(split.train.end(), idx.begin() + n_val, idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

std::vector<double> predict(const ModelParams& params, std::span<const TrainingExample> examples,
                            unsigned threads) {
  std::vector<double> out(examples.size());
  parallel_for(examples.size(), threads, [&](std::size_t k) {
    out[k] = static_cast<double>(forward(examples[k].sub, examples[k].bundle, params).probability);
  });
  return out;
}

namespace {

double validation_auc(const ModelParams& params, std::span<const TrainingExample> dataset,
                      std::span<const std::size_t> idx, unsigned threads) {
  bool pos = false, neg = false;
  for (auto k : idx) {
    pos = pos || dataset[k].label == 1;
    neg = neg || dataset[k].label == 0;
  }
  if (!pos || !neg) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> scores(idx.size());
  std::vector<int> labels(idx.size());
  parallel_for(idx.size(), threads, [&](std::size_t k) {
    const auto& ex = dataset[idx[k]];
    scores[k] = static_cast<double>(forward(ex.sub, ex.bundle, params).probability);
    labels[k] = ex.label;
  });
  return auc(scores, labels);
}

}  // namespace

TrainResult train(std::span<const TrainingExample> dataset, ModelParams params,
                  const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw SingleClassDataset("training dataset is empty");
  bool pos = false, neg = false;
  for (const auto& ex : dataset) {
    if (ex.label != 0 && ex.label != 1) throw DataError("labels must be 0 or 1");
    pos = pos || ex.label == 1;
    neg = neg || ex.label == 0;
  }
  if (!pos || !neg)
    throw SingleClassDataset(std::string("training dataset holds only label ") +
                             (pos ? "1" : "0"));

  Split split = stratified_split(dataset, config.validation_fraction, config.seed);
  if (split.train.empty()) throw DataError("no training examples left after validation split");

  TrainResult result;
  Optimizer optimizer(config);
  Rng rng(mix_seed(config.seed, 0x65706f6368ULL));
  std::vector<std::size_t> order = split.train;
  ModelParams best = params;
  double best_auc = -1;
  std::size_t since_best = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
    double loss_sum = 0;
    for (std::size_t lo = 0; lo < order.size(); lo += config.batch_size) {
      const std::size_t hi = std::min(order.size(), lo + config.batch_size);
      std::vector<const TrainingExample*> batch;
      for (std::size_t k = lo; k < hi; ++k) batch.push_back(&dataset[order[k]]);
      double loss;
      try {
        loss = train_step(params, batch, optimizer, config.threads);
      } catch (const NumericalError& e) {
        throw DivergedLoss(static_cast<int>(epoch), e.what());
      }
      if (epoch == 0 && lo == 0) result.first_batch_loss = loss;
      loss_sum += loss * static_cast<double>(hi - lo);
    }
    EpochTrace row;
    row.epoch = epoch;
    row.loss = loss_sum / static_cast<double>(order.size());
    row.val_auc = validation_auc(params, dataset, split.validation, config.threads);
    result.trace.push_back(row);

    if (config.early_stop_patience == 0 || std::isnan(row.val_auc)) {
      result.best_epoch = epoch;
      continue;
    }
    if (row.val_auc > best_auc) {
      best_auc = row.val_auc;
      best = params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.early_stop_patience) {
      break;
    }
  }
  result.params =
      (config.early_stop_patience > 0 && best_auc >= 0) ? std::move(best) : std::move(params);
  return result;
}

}  // namespace agcn
