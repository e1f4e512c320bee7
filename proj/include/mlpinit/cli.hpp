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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mlpinit/analysis.hpp"
#include "mlpinit/config_json.hpp"
#include "mlpinit/graph.hpp"
#include "mlpinit/metrics.hpp"

namespace mlpinit {

inline constexpr const char* kArtifactVersion = "mlpinit 0.1.0";

// Everything a subcommand needs. Loaded from --config (a plain config or an
// emitted manifest.json), then overridden by command-line flags.
struct RunConfig {
  std::string task = "node";  // node | link
  std::optional<std::string> data_dir;  // unset: generate `synthetic`
  SyntheticConfig synthetic;
  SplitFractions split;
  Architecture model;
  std::size_t embedding_dim = 64;  // link task output width
  std::string arm = "gnn";  // train: gnn | peermlp
  TrainConfig train;      // GNN phase (n epochs)
  TrainConfig mlp_train;  // PeerMLP phase (m epochs)
  SamplerStrategy sampler = FullGraph{};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  double epsilon = 0.002;
  EdgeSplitFractions edge_split;
  std::size_t neg_per_pos = 1;
  HitsMode hits_mode = HitsMode::kSharedPool;
  GridSpec grid;
  double low_loss_delta = 0.1;
  std::size_t hist_bins = 50;
  double hist_lo = -1.0;
  double hist_hi = 1.0;
  bool hist_include_bias = false;
  std::vector<std::string> arms;  // empty: per-command default
  std::vector<std::size_t> sweep_layers = {2, 3, 4};
  std::vector<std::size_t> sweep_hidden = {32, 64};
  std::vector<double> sweep_lr;       // empty: train.learning_rate only
  std::vector<double> sweep_wd;       // empty: train.weight_decay only
  std::vector<std::size_t> sweep_batch;
  std::vector<double> sweep_dropout;
  std::uint64_t seed = 1;
  std::string out = "run";
};

Json to_json(const RunConfig& cfg);
/// Accepts a config object or a manifest ({"command", "version", "config"}).
RunConfig run_config_from_json(const Json& j);

/// Runs one subcommand. Returns the process exit status: 0 on success, 1 on a
/// runtime failure, 2 on a usage or config error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlpinit
