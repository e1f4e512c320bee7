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

#include <optional>
#include <string>
#include <vector>

#include "mlpinit/trainer.hpp"

namespace mlpinit {

/// Copies `source` onto `target`'s architecture. Throws TransferError naming
/// every tensor whose name or shape disagrees.
template <typename T>
ParamSet<T> transfer_weights(const ParamSet<T>& source, const ModelConfig& target);

template <typename T>
struct MlpInitResult {
  TrainResult<T> mlp;             // PeerMLP phase
  ParamSet<T> params_at_transfer;  // val-selected PeerMLP weights
  TrainResult<T> gnn;             // fine-tuning phase, starting from the transfer
  ParamSet<T> best_params;        // = params_at_transfer when gnn epochs = 0
};

/// Trains derive_peermlp(gnn_config) for mlp_tcfg.epochs from
/// init_params(peer, mlp_tcfg.seed), transfers its best weights and fine-tunes
/// the GNN for gnn_tcfg.epochs.
template <typename T>
MlpInitResult<T> run_mlpinit(const ModelConfig& gnn_config, const Graph& graph, const Task& task,
                             const TrainConfig& mlp_tcfg, const TrainConfig& gnn_tcfg,
                             const SamplerStrategy& sampler = FullGraph{},
                             const TrainHooks<T>& mlp_hooks = {},
                             const TrainHooks<T>& gnn_hooks = {});

/// Smallest evaluated epoch whose running-max test metric reaches
/// target − epsilon; nullopt when never reached. `initial` (epoch 0) is
/// considered first when given.
std::optional<std::size_t> epochs_to_target(const std::vector<EpochRecord>& history,
                                            double target, double epsilon,
                                            const EpochRecord* initial = nullptr);

/// epochs_random / epochs_mlpinit; nullopt when the MLPInit arm needs zero
/// epochs or did not reach the target.
std::optional<double> compute_speedup(std::optional<double> epochs_random,
                                      std::optional<double> epochs_mlpinit);

/// Two decimals, or "---" when undefined.
std::string format_speedup(std::optional<double> speedup);

}  // namespace mlpinit
