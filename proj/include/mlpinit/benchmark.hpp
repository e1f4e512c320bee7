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
#include <optional>
#include <vector>

#include "mlpinit/config_json.hpp"
#include "mlpinit/mlpinit.hpp"

namespace mlpinit {

struct BenchmarkConfig {
  ModelConfig gnn;
  TrainConfig gnn_train;  // n epochs; shared by both arms
  TrainConfig mlp_train;  // m epochs for the PeerMLP phase
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  double epsilon = 0.002;
  SamplerStrategy sampler = FullGraph{};
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  double target = 0.0;  // random arm's val-selected test metric
  std::optional<std::size_t> epochs_random;   // nullopt = not reached
  std::optional<std::size_t> epochs_mlpinit;  // nullopt = not reached
  bool met_at_transfer = false;               // MLPInit met the target at epoch 0
  double best_metric_random = 0.0;
  double best_metric_mlpinit = 0.0;
  double mlp_train_wall_ms = 0.0;
  double gnn_wall_ms_random = 0.0;
  double gnn_wall_ms_mlpinit = 0.0;

  std::optional<double> speedup() const;
  bool operator==(const SeedOutcome&) const = default;
};

struct SpeedupReport {
  std::vector<SeedOutcome> seeds;
  double epsilon = 0.002;
  // Aggregates, recomputed from `seeds` by summarize().
  std::optional<double> mean_epochs_random;
  std::optional<double> mean_epochs_mlpinit;
  std::optional<double> speedup;         // mean(random) / mean(mlpinit)
  std::optional<double> median_speedup;  // per-seed; +inf when MLPInit met the target at transfer
  std::size_t not_reached_random = 0;
  std::size_t not_reached_mlpinit = 0;
  double mlp_train_wall_ms = 0.0;
  double gnn_wall_ms_random = 0.0;
  double gnn_wall_ms_mlpinit = 0.0;
  Json configs = Json::object();

  bool operator==(const SpeedupReport&) const = default;
};

/// Fills the aggregate fields from the per-seed entries. Means run over seeds
/// where both arms reached the target. In the per-seed median a not-reached
/// MLPInit arm counts as speedup 0 and met-at-transfer as +inf.
void summarize(SpeedupReport& report);

template <typename T>
using SeedCallback = std::function<void(std::uint64_t seed, const TrainResult<T>& random_arm,
                                        const MlpInitResult<T>& mlpinit_arm)>;

/// Per seed: a random-init run sets the target (its val-selected test
/// metric); the MLPInit run is measured against the same target.
template <typename T>
SpeedupReport benchmark(const BenchmarkConfig& cfg, const Graph& graph, const Task& task,
                        const SeedCallback<T>& on_seed = {});

Json to_json(const SpeedupReport& report);
SpeedupReport speedup_report_from_json(const Json& j);

}  // namespace mlpinit
