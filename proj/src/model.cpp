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

#include "mlpinit/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "mlpinit/errors.hpp"
#include "mlpinit/rng.hpp"

namespace mlpinit {

void Aggregator::validate() const {
  if (type != AggregatorType::kSoftmax) return;
  if (!std::isfinite(temperature)) throw ConfigError("softmax temperature must be finite");
  if (temperature < 0.0) throw ConfigError("softmax temperature must be >= 0");
}

std::string_view to_string(LayerKind kind) { return kind == LayerKind::kGcn ? "gcn" : "sage"; }

std::string_view to_string(Activation act) { return act == Activation::kRelu ? "relu" : "none"; }

std::string to_string(const Aggregator& agg) {
  switch (agg.type) {
    case AggregatorType::kMean:
      return "mean";
    case AggregatorType::kMax:
      return "max";
    case AggregatorType::kMedian:
      return "median";
    case AggregatorType::kSoftmax: {
      std::ostringstream os;
      os << "softmax:" << agg.temperature;
      return os.str();
    }
  }
  return "mean";
}

LayerKind parse_layer_kind(std::string_view name) {
  if (name == "gcn") return LayerKind::kGcn;
  if (name == "sage") return LayerKind::kSage;
  throw ConfigError("unknown layer kind '" + std::string(name) + "'");
}

Aggregator parse_aggregator(std::string_view name) {
  Aggregator agg;
  if (name == "mean") return agg;
  if (name == "max") {
    agg.type = AggregatorType::kMax;
    return agg;
  }
  if (name == "median") {
    agg.type = AggregatorType::kMedian;
    return agg;
  }
  if (name.substr(0, 7) == "softmax") {
    agg.type = AggregatorType::kSoftmax;
    if (name.size() > 7) {
      if (name[7] != ':') throw ConfigError("bad aggregator '" + std::string(name) + "'");
      try {
        agg.temperature = std::stod(std::string(name.substr(8)));
      } catch (const std::exception&) {
        throw ConfigError("bad softmax temperature in '" + std::string(name) + "'");
      }
    }
    agg.validate();
    return agg;
  }
  throw ConfigError("unknown aggregator '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  if (layers.empty()) throw ConfigError("model has no layers");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    std::string where = "layer " + std::to_string(i);
    if (l.in_dim < 1 || l.out_dim < 1) throw ConfigError(where + ": dims must be >= 1");
    if (l.skip && l.in_dim != l.out_dim) {
      throw ConfigError(where + ": skip connection requires in_dim == out_dim");
    }
    if (i > 0 && layers[i - 1].out_dim != l.in_dim) {
      throw ConfigError(where + ": in_dim " + std::to_string(l.in_dim) +
                        " does not chain with previous out_dim " +
                        std::to_string(layers[i - 1].out_dim));
    }
    l.aggregator.validate();
  }
}

AdjacencyMode default_adjacency_mode(LayerKind kind) {
  return kind == LayerKind::kGcn ? AdjacencyMode::kSymSelfLoop : AdjacencyMode::kRowMean;
}

ModelConfig build_model(const Architecture& arch, std::size_t in_dim, std::size_t out_dim) {
  if (arch.num_layers < 1) throw ConfigError("num_layers must be >= 1");
  ModelConfig cfg;
  cfg.dropout = arch.dropout;
  cfg.adjacency_mode = arch.adjacency_mode.value_or(default_adjacency_mode(arch.kind));
  for (std::size_t i = 0; i < arch.num_layers; ++i) {
    LayerSpec l;
    l.kind = arch.kind;
    l.in_dim = i == 0 ? in_dim : arch.hidden;
    l.out_dim = i + 1 == arch.num_layers ? out_dim : arch.hidden;
    l.activation = i + 1 == arch.num_layers ? Activation::kNone : Activation::kRelu;
    l.bias = arch.bias;
    l.aggregator = arch.aggregator;
    l.skip = arch.skip && l.in_dim == l.out_dim;
    cfg.layers.push_back(l);
  }
  cfg.validate();
  return cfg;
}

ModelConfig derive_peermlp(const ModelConfig& config) {
  ModelConfig peer = config;
  peer.aggregation = false;
  return peer;
}

std::vector<TensorShape> param_shapes(const ModelConfig& config) {
  std::vector<TensorShape> shapes;
  for (std::size_t i = 0; i < config.layers.size(); ++i) {
    const auto& l = config.layers[i];
    std::string prefix = "layer" + std::to_string(i) + ".";
    if (l.kind == LayerKind::kGcn) {
      shapes.push_back({prefix + "weight", {l.in_dim, l.out_dim}});
    } else {
      shapes.push_back({prefix + "weight_root", {l.in_dim, l.out_dim}});
      shapes.push_back({prefix + "weight_neigh", {l.in_dim, l.out_dim}});
    }
    if (l.bias) shapes.push_back({prefix + "bias", {l.out_dim}});
  }
  return shapes;
}

template <typename T>
void ParamSet<T>::add(std::string name, std::vector<std::size_t> dims, Matrix<T> value) {
  std::size_t expected = 1;
  for (auto d : dims) expected *= d;
  if (value.size() != expected) {
    throw ShapeError("tensor '" + name + "' value count does not match its dims");
  }
  tensors_.push_back({std::move(name), std::move(dims), std::move(value)});
}

template <typename T>
const Matrix<T>* ParamSet<T>::find(std::string_view name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return &t.value;
  }
  return nullptr;
}

template <typename T>
const Matrix<T>& ParamSet<T>::get(std::string_view name) const {
  const Matrix<T>* m = find(name);
  if (m == nullptr) throw ShapeError("parameter set has no tensor '" + std::string(name) + "'");
  return *m;
}

template <typename T>
Matrix<T>& ParamSet<T>::get(std::string_view name) {
  return const_cast<Matrix<T>&>(std::as_const(*this).get(name));
}

template <typename T>
std::vector<TensorShape> ParamSet<T>::shapes() const {
  std::vector<TensorShape> out;
  for (const auto& t : tensors_) out.push_back({t.name, t.dims});
  return out;
}

template <typename T>
std::size_t ParamSet<T>::num_values() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.value.size();
  return n;
}

template <typename T>
ParamSet<T> ParamSet<T>::zeros_like() const {
  ParamSet out;
  for (const auto& t : tensors_) {
    out.add(t.name, t.dims, Matrix<T>(t.value.rows(), t.value.cols()));
  }
  return out;
}

template <typename T>
void ParamSet<T>::axpy(T alpha, const ParamSet& other) {
  if (shapes() != other.shapes()) throw ShapeError("axpy: parameter shapes differ");
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    auto dst = tensors_[i].value.values();
    auto src = other.tensors_[i].value.values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += alpha * src[k];
  }
}

template <typename T>
std::vector<double> ParamSet<T>::flatten() const {
  std::vector<double> out;
  out.reserve(num_values());
  for (const auto& t : tensors_) {
    for (T v : t.value.values()) out.push_back(static_cast<double>(v));
  }
  return out;
}

template <typename T>
ParamSet<T> init_params(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng = make_rng(seed, "init");
  ParamSet<T> params;
  for (const auto& shape : param_shapes(config)) {
    if (shape.dims.size() == 1) {
      params.add(shape.name, shape.dims, Matrix<T>(1, shape.dims[0]));
      continue;
    }
    const std::size_t in = shape.dims[0];
    const std::size_t out = shape.dims[1];
    const double a = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> u(-a, a);
    Matrix<T> w(in, out);
    for (auto& v : w.values()) v = static_cast<T>(u(rng));
    params.add(shape.name, shape.dims, std::move(w));
  }
  return params;
}

template <typename T>
void check_params(const ModelConfig& config, const ParamSet<T>& params) {
  auto want = param_shapes(config);
  auto have = params.shapes();
  if (want == have) return;
  std::ostringstream os;
  os << "parameter shapes do not match the model:";
  std::size_t n = std::max(want.size(), have.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto fmt = [](const TensorShape& s) {
      std::ostringstream o;
      o << s.name << "[";
      for (std::size_t k = 0; k < s.dims.size(); ++k) o << (k ? "," : "") << s.dims[k];
      o << "]";
      return o.str();
    };
    if (i >= want.size()) {
      os << " unexpected " << fmt(have[i]) << ";";
    } else if (i >= have.size()) {
      os << " missing " << fmt(want[i]) << ";";
    } else if (!(want[i] == have[i])) {
      os << " expected " << fmt(want[i]) << " got " << fmt(have[i]) << ";";
    }
  }
  throw ShapeError(os.str());
}

template class ParamSet<float>;
template class ParamSet<double>;
template ParamSet<float> init_params(const ModelConfig&, std::uint64_t);
template ParamSet<double> init_params(const ModelConfig&, std::uint64_t);
template void check_params(const ModelConfig&, const ParamSet<float>&);
template void check_params(const ModelConfig&, const ParamSet<double>&);

}  // namespace mlpinit
