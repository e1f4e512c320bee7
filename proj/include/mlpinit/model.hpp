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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlpinit/linalg.hpp"

namespace mlpinit {

enum class LayerKind { kGcn, kSage };
enum class Activation { kRelu, kNone };
enum class AggregatorType { kMean, kMax, kMedian, kSoftmax };

// Neighbor aggregator; `temperature` is only read by kSoftmax.
struct Aggregator {
  AggregatorType type = AggregatorType::kMean;
  double temperature = 1.0;

  void validate() const;
  bool operator==(const Aggregator&) const = default;
};

std::string_view to_string(LayerKind kind);
std::string_view to_string(Activation act);
std::string to_string(const Aggregator& agg);
LayerKind parse_layer_kind(std::string_view name);
/// Accepts "mean", "max", "median", "softmax" or "softmax:<t>".
Aggregator parse_aggregator(std::string_view name);

struct LayerSpec {
  LayerKind kind = LayerKind::kGcn;
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  Activation activation = Activation::kRelu;
  bool bias = true;
  Aggregator aggregator;  // sage only
  bool skip = false;      // residual add of the layer input

  bool operator==(const LayerSpec&) const = default;
};

// A layered GNN, or its PeerMLP when `aggregation` is false. Both accept the
// same ParamSet.
struct ModelConfig {
  std::vector<LayerSpec> layers;
  double dropout = 0.0;
  AdjacencyMode adjacency_mode = AdjacencyMode::kSymSelfLoop;
  bool aggregation = true;

  std::size_t depth() const { return layers.size(); }
  std::size_t input_dim() const { return layers.front().in_dim; }
  std::size_t output_dim() const { return layers.back().out_dim; }

  /// Throws ConfigError naming the offending layer.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

// Compact description used by the CLI and experiments to build a ModelConfig.
struct Architecture {
  LayerKind kind = LayerKind::kSage;
  std::size_t num_layers = 2;
  std::size_t hidden = 64;
  Aggregator aggregator;
  bool bias = true;
  bool skip = false;  // applied to every layer whose in/out dims agree
  double dropout = 0.0;
  std::optional<AdjacencyMode> adjacency_mode;  // default depends on kind
};

AdjacencyMode default_adjacency_mode(LayerKind kind);

ModelConfig build_model(const Architecture& arch, std::size_t in_dim, std::size_t out_dim);

/// Removes neighbor aggregation; the parameter shape contract is unchanged.
ModelConfig derive_peermlp(const ModelConfig& config);

struct TensorShape {
  std::string name;
  std::vector<std::size_t> dims;

  bool operator==(const TensorShape&) const = default;
};

/// Ordered (name, shape) list a ModelConfig's parameters must match. GCN
/// layers own "layer{i}.weight"; sage layers own "layer{i}.weight_root" and
/// "layer{i}.weight_neigh"; both may own "layer{i}.bias".
std::vector<TensorShape> param_shapes(const ModelConfig& config);

template <typename T>
struct NamedTensor {
  std::string name;
  std::vector<std::size_t> dims;  // [in, out] for weights, [out] for biases
  Matrix<T> value;                // biases are stored as 1×out

  bool operator==(const NamedTensor&) const = default;
};

template <typename T>
class ParamSet {
 public:
  ParamSet() = default;

  void add(std::string name, std::vector<std::size_t> dims, Matrix<T> value);

  std::size_t size() const { return tensors_.size(); }
  NamedTensor<T>& operator[](std::size_t i) { return tensors_[i]; }
  const NamedTensor<T>& operator[](std::size_t i) const { return tensors_[i]; }
  auto begin() { return tensors_.begin(); }
  auto end() { return tensors_.end(); }
  auto begin() const { return tensors_.begin(); }
  auto end() const { return tensors_.end(); }

  const Matrix<T>& get(std::string_view name) const;
  Matrix<T>& get(std::string_view name);
  const Matrix<T>* find(std::string_view name) const;

  std::vector<TensorShape> shapes() const;
  std::size_t num_values() const;

  /// Same names and shapes, all values zero.
  ParamSet zeros_like() const;
  /// this += alpha * other (shapes must match).
  void axpy(T alpha, const ParamSet& other);
  /// Concatenated values in tensor order.
  std::vector<double> flatten() const;

  template <typename U>
  ParamSet<U> cast() const {
    ParamSet<U> out;
    for (const auto& t : tensors_) out.add(t.name, t.dims, t.value.template cast<U>());
    return out;
  }

  bool operator==(const ParamSet&) const = default;

 private:
  std::vector<NamedTensor<T>> tensors_;
};

/// Glorot-uniform weights, a = sqrt(6 / (in + out)); zero biases. Values are
/// drawn in double precision so float and double sets agree after rounding.
template <typename T>
ParamSet<T> init_params(const ModelConfig& config, std::uint64_t seed);

/// Throws ShapeError listing every tensor that differs from the config.
template <typename T>
void check_params(const ModelConfig& config, const ParamSet<T>& params);

}  // namespace mlpinit
