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

#include "mlpinit/network.hpp"

#include <random>
#include <string>

#include "mlpinit/aggregate.hpp"
#include "mlpinit/errors.hpp"

namespace mlpinit {

namespace {

std::string prefix(std::size_t l) { return "layer" + std::to_string(l) + "."; }

template <typename T>
std::shared_ptr<const LayerAdjacency<T>> make_layer(CsrMatrix<T> normalized) {
  auto layer = std::make_shared<LayerAdjacency<T>>();
  layer->backward = normalized.transpose();
  layer->forward = std::move(normalized);
  return layer;
}

template <typename T>
void add_bias(Matrix<T>& m, const Matrix<T>& bias) {
  auto b = bias.row(0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] += b[c];
  }
}

template <typename T>
void add_into(Matrix<T>& dst, const Matrix<T>& src) {
  auto d = dst.values();
  auto s = src.values();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] += s[k];
}

template <typename T>
Matrix<T> column_sums(const Matrix<T>& m) {
  Matrix<T> out(1, m.cols());
  auto dst = out.row(0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) dst[c] += row[c];
  }
  return out;
}

}  // namespace

template <typename T>
Propagation<T> Propagation<T>::full(const CsrMatrix<double>& adjacency, const ModelConfig& config) {
  Propagation p;
  auto layer = make_layer(normalize_adjacency(adjacency, config.adjacency_mode).template cast<T>());
  p.layers_.assign(config.depth(), layer);
  return p;
}

template <typename T>
Propagation<T> Propagation<T>::from_blocks(const std::vector<CsrMatrix<double>>& blocks,
                                           const ModelConfig& config) {
  if (blocks.size() != config.depth()) {
    throw ShapeError("expected " + std::to_string(config.depth()) + " adjacency blocks, got " +
                     std::to_string(blocks.size()));
  }
  Propagation p;
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    if (l > 0 && blocks[l] == blocks[l - 1]) {
      p.layers_.push_back(p.layers_.back());
      continue;
    }
    p.layers_.push_back(
        make_layer(normalize_adjacency(blocks[l], config.adjacency_mode).template cast<T>()));
  }
  return p;
}

template <typename T>
Propagation<T> Propagation<T>::identity(std::size_t n, std::size_t depth) {
  Propagation p;
  p.layers_.assign(depth, make_layer(CsrMatrix<T>::identity(n)));
  return p;
}

template <typename T>
Matrix<T> forward(const ModelConfig& config, const ParamSet<T>& params, const Matrix<T>& features,
                  const Propagation<T>* prop, Rng* dropout_rng, ForwardCache<T>* cache) {
  const bool aggregation = config.aggregation;
  if (aggregation) {
    if (prop == nullptr) {
      throw ShapeError("forward: a GNN config needs an adjacency (derive the PeerMLP to run without)");
    }
    if (prop->depth() != config.depth()) throw ShapeError("forward: propagation depth mismatch");
    if (prop->num_nodes() != features.rows()) {
      throw ShapeError("forward: adjacency has " + std::to_string(prop->num_nodes()) +
                       " nodes but features have " + std::to_string(features.rows()) + " rows");
    }
  }
  if (features.cols() != config.input_dim()) {
    throw ShapeError("forward: features have " + std::to_string(features.cols()) +
                     " columns, model expects " + std::to_string(config.input_dim()));
  }
  if (cache != nullptr) {
    cache->layers.assign(config.depth(), {});
    cache->aggregation = aggregation;
    cache->num_nodes = features.rows();
  }

  Matrix<T> h = features;
  for (std::size_t l = 0; l < config.depth(); ++l) {
    const LayerSpec& spec = config.layers[l];
    const std::string p = prefix(l);

    Matrix<T> mask;
    if (dropout_rng != nullptr && l > 0 && config.dropout > 0.0) {
      std::bernoulli_distribution keep(1.0 - config.dropout);
      const T scale = static_cast<T>(1.0 / (1.0 - config.dropout));
      mask = Matrix<T>(h.rows(), h.cols());
      auto mv = mask.values();
      auto hv = h.values();
      for (std::size_t k = 0; k < mv.size(); ++k) {
        mv[k] = keep(*dropout_rng) ? scale : T(0);
        hv[k] *= mv[k];
      }
    }

    Matrix<T> pre;
    Matrix<T> aggregated;
    if (spec.kind == LayerKind::kGcn) {
      Matrix<T> z = dense_matmul(h, params.get(p + "weight"));
      pre = aggregation ? spmm(prop->layer(l).forward, z) : std::move(z);
    } else {
      pre = dense_matmul(h, params.get(p + "weight_root"));
      if (aggregation) {
        aggregated = aggregate(spec.aggregator, prop->layer(l).forward, h);
        add_into(pre, dense_matmul(aggregated, params.get(p + "weight_neigh")));
      } else {
        add_into(pre, dense_matmul(h, params.get(p + "weight_neigh")));
      }
    }
    if (spec.bias) add_bias(pre, params.get(p + "bias"));
    if (spec.skip) add_into(pre, h);

    // Checked before the ReLU, which would turn NaN into 0.
    if (!all_finite(pre)) {
      throw NumericError("non-finite activation in layer " + std::to_string(l));
    }
    Matrix<T> out = pre;
    if (spec.activation == Activation::kRelu) {
      for (auto& v : out.values()) v = v > T(0) ? v : T(0);
    }
    if (cache != nullptr) {
      auto& lc = cache->layers[l];
      lc.input = std::move(h);
      lc.mask = std::move(mask);
      lc.aggregated = std::move(aggregated);
      lc.pre = std::move(pre);
    }
    h = std::move(out);
  }
  return h;
}

template <typename T>
ParamSet<T> backward(const ModelConfig& config, const ParamSet<T>& params,
                     const Propagation<T>* prop, const ForwardCache<T>& cache,
                     const Matrix<T>& grad_output, Matrix<T>* grad_input) {
  if (cache.layers.size() != config.depth() || cache.aggregation != config.aggregation) {
    throw ShapeError("backward: cache does not come from this model config");
  }
  if (config.aggregation && prop == nullptr) throw ShapeError("backward: missing adjacency");
  if (grad_output.rows() != cache.num_nodes || grad_output.cols() != config.output_dim()) {
    throw ShapeError("backward: grad_output shape mismatch");
  }
  ParamSet<T> grads = params.zeros_like();
  Matrix<T> g = grad_output;

  for (std::size_t l = config.depth(); l-- > 0;) {
    const LayerSpec& spec = config.layers[l];
    const LayerCache<T>& lc = cache.layers[l];
    const std::string p = prefix(l);

    if (spec.activation == Activation::kRelu) {
      auto gv = g.values();
      auto pv = lc.pre.values();
      for (std::size_t k = 0; k < gv.size(); ++k) {
        if (!(pv[k] > T(0))) gv[k] = T(0);
      }
    }
    if (spec.bias) grads.get(p + "bias") = column_sums(g);

    Matrix<T> g_in;
    if (spec.kind == LayerKind::kGcn) {
      const Matrix<T> g_z = config.aggregation ? spmm(prop->layer(l).backward, g) : g;
      grads.get(p + "weight") = matmul_transpose_a(lc.input, g_z);
      g_in = matmul_transpose_b(g_z, params.get(p + "weight"));
    } else {
      const Matrix<T>& agg_in = config.aggregation ? lc.aggregated : lc.input;
      grads.get(p + "weight_root") = matmul_transpose_a(lc.input, g);
      grads.get(p + "weight_neigh") = matmul_transpose_a(agg_in, g);
      g_in = matmul_transpose_b(g, params.get(p + "weight_root"));
      Matrix<T> g_agg = matmul_transpose_b(g, params.get(p + "weight_neigh"));
      if (config.aggregation) {
        add_into(g_in, aggregate_backward(spec.aggregator, prop->layer(l).forward, lc.input, g_agg));
      } else {
        add_into(g_in, g_agg);
      }
    }
    if (spec.skip) add_into(g_in, g);
    if (!lc.mask.empty()) {
      auto gv = g_in.values();
      auto mv = lc.mask.values();
      for (std::size_t k = 0; k < gv.size(); ++k) gv[k] *= mv[k];
    }
    g = std::move(g_in);
  }
  if (grad_input != nullptr) *grad_input = std::move(g);
  return grads;
}

template class Propagation<float>;
template class Propagation<double>;
template Matrix<float> forward(const ModelConfig&, const ParamSet<float>&, const Matrix<float>&,
                               const Propagation<float>*, Rng*, ForwardCache<float>*);
template Matrix<double> forward(const ModelConfig&, const ParamSet<double>&, const Matrix<double>&,
                                const Propagation<double>*, Rng*, ForwardCache<double>*);
template ParamSet<float> backward(const ModelConfig&, const ParamSet<float>&,
                                  const Propagation<float>*, const ForwardCache<float>&,
                                  const Matrix<float>&, Matrix<float>*);
template ParamSet<double> backward(const ModelConfig&, const ParamSet<double>&,
                                   const Propagation<double>*, const ForwardCache<double>&,
                                   const Matrix<double>&, Matrix<double>*);

}  // namespace mlpinit
