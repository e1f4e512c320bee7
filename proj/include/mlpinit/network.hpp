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

#include <memory>
#include <vector>

#include "mlpinit/linalg.hpp"
#include "mlpinit/model.hpp"
#include "mlpinit/rng.hpp"

namespace mlpinit {

template <typename T>
struct LayerAdjacency {
  CsrMatrix<T> forward;   // normalized Â
  CsrMatrix<T> backward;  // Âᵀ
};

// Per-layer propagation matrices for one forward pass. Layers may share the
// same matrix (full graph) or use distinct sampled blocks.
template <typename T>
class Propagation {
 public:
  /// Normalizes `adjacency` with config.adjacency_mode and uses it at every layer.
  static Propagation full(const CsrMatrix<double>& adjacency, const ModelConfig& config);
  /// One raw block per layer, each normalized with config.adjacency_mode.
  static Propagation from_blocks(const std::vector<CsrMatrix<double>>& blocks,
                                 const ModelConfig& config);
  /// Â = I at every layer, without normalization.
  static Propagation identity(std::size_t n, std::size_t depth);

  std::size_t depth() const { return layers_.size(); }
  std::size_t num_nodes() const { return layers_.empty() ? 0 : layers_.front()->forward.rows(); }
  const LayerAdjacency<T>& layer(std::size_t l) const { return *layers_.at(l); }

 private:
  std::vector<std::shared_ptr<const LayerAdjacency<T>>> layers_;
};

template <typename T>
struct LayerCache {
  Matrix<T> input;       // after dropout
  Matrix<T> mask;        // inverted-dropout scale per input entry; empty if none
  Matrix<T> aggregated;  // sage: aggregate(Â, input); empty for gcn
  Matrix<T> pre;         // pre-activation
};

template <typename T>
struct ForwardCache {
  std::vector<LayerCache<T>> layers;
  bool aggregation = true;
  std::size_t num_nodes = 0;
};

/// Runs the model. `prop` may be null only for a PeerMLP config (it is ignored
/// when config.aggregation is false). Dropout is applied to the inputs of
/// layers 1..L-1 with inverted scaling when `dropout_rng` is non-null
/// (training mode). Fills `cache` when non-null. Throws NumericError naming
/// the layer if an activation becomes non-finite.
template <typename T>
Matrix<T> forward(const ModelConfig& config, const ParamSet<T>& params, const Matrix<T>& features,
                  const Propagation<T>* prop, Rng* dropout_rng = nullptr,
                  ForwardCache<T>* cache = nullptr);

/// Exact gradients of the cached forward pass w.r.t. every parameter. When
/// `grad_input` is non-null it receives the gradient w.r.t. the features.
template <typename T>
ParamSet<T> backward(const ModelConfig& config, const ParamSet<T>& params,
                     const Propagation<T>* prop, const ForwardCache<T>& cache,
                     const Matrix<T>& grad_output, Matrix<T>* grad_input = nullptr);

}  // namespace mlpinit
