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

#include "mlpinit/mlpinit.hpp"

#include <algorithm>
#include <cstdio>

#include "mlpinit/errors.hpp"

namespace mlpinit {

namespace {

std::string dims_string(const std::vector<std::size_t>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "x" : "") + std::to_string(dims[i]);
  return s + "]";
}

}  // namespace

template <typename T>
ParamSet<T> transfer_weights(const ParamSet<T>& source, const ModelConfig& target) {
  const auto want = param_shapes(target);
  std::vector<std::string> problems;
  for (const auto& shape : want) {
    const NamedTensor<T>* found = nullptr;
    for (const auto& t : source) {
      if (t.name == shape.name) found = &t;
    }
    if (found == nullptr) {
      problems.push_back(shape.name + " missing");
    } else if (found->dims != shape.dims) {
      problems.push_back(shape.name + " has shape " + dims_string(found->dims) + ", expected " +
                         dims_string(shape.dims));
    }
  }
  for (const auto& t : source) {
    bool known = std::any_of(want.begin(), want.end(), [&](const auto& s) { return s.name == t.name; });
    if (!known) problems.push_back(t.name + " is not a parameter of the target model");
  }
  if (!problems.empty()) {
    std::string msg = "weight transfer failed:";
    for (const auto& p : problems) msg += " " + p + ";";
    msg.pop_back();
    throw TransferError(msg);
  }
  ParamSet<T> out;
  for (const auto& shape : want) out.add(shape.name, shape.dims, source.get(shape.name));
  return out;
}

template <typename T>
MlpInitResult<T> run_mlpinit(const ModelConfig& gnn_config, const Graph& graph, const Task& task,
                             const TrainConfig& mlp_tcfg, const TrainConfig& gnn_tcfg,
                             const SamplerStrategy& sampler, const TrainHooks<T>& mlp_hooks,
                             const TrainHooks<T>& gnn_hooks) {
  const ModelConfig peer = derive_peermlp(gnn_config);
  MlpInitResult<T> r;
  r.mlp = train_model<T>(peer, graph, task, mlp_tcfg, init_params<T>(peer, mlp_tcfg.seed),
                         FullGraph{}, mlp_hooks);
  r.params_at_transfer = transfer_weights(r.mlp.best_params, gnn_config);
  r.gnn = train_model<T>(gnn_config, graph, task, gnn_tcfg, r.params_at_transfer, sampler, gnn_hooks);
  r.best_params = r.gnn.best_params;
  return r;
}

std::optional<std::size_t> epochs_to_target(const std::vector<EpochRecord>& history,
                                            double target, double epsilon,
                                            const EpochRecord* initial) {
  const double bar = target - epsilon;
  if (initial != nullptr && initial->test_metric >= bar) return initial->epoch;
  double running = initial != nullptr ? initial->test_metric : -1.0;
  for (const auto& r : history) {
    running = std::max(running, r.test_metric);
    if (running >= bar) return r.epoch;
  }
  return std::nullopt;
}

std::optional<double> compute_speedup(std::optional<double> epochs_random,
                                      std::optional<double> epochs_mlpinit) {
  if (!epochs_random || !epochs_mlpinit || !(*epochs_mlpinit > 0.0) || !(*epochs_random > 0.0)) {
    return std::nullopt;
  }
  return *epochs_random / *epochs_mlpinit;
}

std::string format_speedup(std::optional<double> speedup) {
  if (!speedup) return "---";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *speedup);
  return buf;
}

template ParamSet<float> transfer_weights(const ParamSet<float>&, const ModelConfig&);
template ParamSet<double> transfer_weights(const ParamSet<double>&, const ModelConfig&);
template MlpInitResult<float> run_mlpinit(const ModelConfig&, const Graph&, const Task&,
                                          const TrainConfig&, const TrainConfig&,
                                          const SamplerStrategy&, const TrainHooks<float>&,
                                          const TrainHooks<float>&);
template MlpInitResult<double> run_mlpinit(const ModelConfig&, const Graph&, const Task&,
                                           const TrainConfig&, const TrainConfig&,
                                           const SamplerStrategy&, const TrainHooks<double>&,
                                           const TrainHooks<double>&);

}  // namespace mlpinit
