/*
 * Copyright 2026 The mlpinit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "mlpinit/graph.hpp"
#include "mlpinit/metrics.hpp"
#include "mlpinit/model.hpp"
#include "mlpinit/network.hpp"
#include "mlpinit/sampler.hpp"

namespace mlpinit {

struct TrainConfig {
  std::size_t epochs = 50;
  double learning_rate = 0.01;
  double weight_decay = 0.0;
  std::size_t batch_size = 0;  // 0 = full batch
  std::optional<double> dropout;  // overrides ModelConfig::dropout when set
  std::uint64_t seed = 1;
  std::size_t eval_every = 1;
  int precision = 32;  // 32 or 64

  void validate() const;
};

struct NodeClassification {};

// Edges are scored with the inner-product decoder on node embeddings computed
// over split->message_adjacency.
struct LinkPrediction {
  std::shared_ptr<const EdgeSplit> split;
};

using Task = std::variant<NodeClassification, LinkPrediction>;

// Selection metric is accuracy for node tasks and AUC for link tasks.
struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // eval mode, no dropout
  double val_metric = 0.0;
  double test_metric = 0.0;
  double wall_ms = 0.0;  // cumulative since the start of training

  bool operator==(const EpochRecord&) const = default;
};

struct EvalResult {
  double loss = 0.0;
  double val_metric = 0.0;
  double test_metric = 0.0;
};

// Full-graph, eval-mode evaluation of one model on one task. Holds a pointer
// to `graph`, which must outlive it.
template <typename T>
class Evaluator {
 public:
  Evaluator(const ModelConfig& config, const Graph& graph, Task task);

  /// Final-layer outputs for every node.
  Matrix<T> outputs(const ParamSet<T>& params) const;
  /// Training loss only.
  double loss(const ParamSet<T>& params) const;
  EvalResult evaluate(const ParamSet<T>& params) const;
  /// Accuracy on an arbitrary node set (node task only).
  double node_accuracy(const ParamSet<T>& params, std::span<const NodeId> rows) const;
  /// Link ranking metrics on the test edges (link task only).
  RankMetrics link_metrics(const ParamSet<T>& params, bool test_split = true,
                           HitsMode mode = HitsMode::kSharedPool) const;

  const ModelConfig& config() const { return config_; }
  const Task& task() const { return task_; }

 private:
  ModelConfig config_;
  const Graph* graph_;
  Task task_;
  Matrix<T> features_;
  std::optional<Propagation<T>> prop_;
};

template <typename T>
struct TrainHooks {
  /// Called with epoch 0 before the first update and after every epoch.
  std::function<void(std::size_t epoch, const ParamSet<T>& params)> on_epoch;
};

template <typename T>
struct TrainResult {
  EpochRecord initial;               // evaluation of the init params (epoch 0)
  std::vector<EpochRecord> history;  // one record per evaluation, epochs ≥ 1
  ParamSet<T> best_params;           // max val_metric; ties → earliest epoch
  std::size_t best_epoch = 0;
  ParamSet<T> final_params;
  double wall_ms = 0.0;
};

/// Seeded training loop: shuffled mini-batches (or one full batch) per epoch,
/// forward → loss → backward → Adam. A PeerMLP config trains on node features
/// alone; GNN mini-batches go through `sampler`. Throws DivergenceError with
/// the epoch index when the loss or an activation becomes non-finite.
template <typename T>
TrainResult<T> train_model(const ModelConfig& config, const Graph& graph, const Task& task,
                           const TrainConfig& tcfg, const ParamSet<T>& init,
                           const SamplerStrategy& sampler = FullGraph{},
                           const TrainHooks<T>& hooks = {});

/// Writes `epoch,train_loss,val_metric,test_metric,wall_ms` with 6 significant
/// digits; `initial`, when given, is the first row.
void write_history(std::ostream& out, const std::vector<EpochRecord>& history,
                   const EpochRecord* initial = nullptr);
std::vector<EpochRecord> read_history(std::istream& in);

/// Uniform unordered pairs (u != v) absent from `adjacency`.
std::vector<Edge> sample_negative_edges(const CsrMatrix<double>& adjacency, std::size_t count,
                                        Rng& rng);

}  // namespace mlpinit
