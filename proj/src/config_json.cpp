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

#include "mlpinit/config_json.hpp"

#include <sstream>

#include "mlpinit/errors.hpp"

namespace mlpinit {

FieldReader::FieldReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw ConfigError("field '" + path_ + "': expected an object");
}

bool FieldReader::has(const std::string& key) const {
  auto it = j_.find(key);
  return it != j_.end() && !it->is_null();
}

const Json& FieldReader::raw(const std::string& key) const {
  auto it = j_.find(key);
  if (it == j_.end()) throw ConfigError("field '" + path_of(key) + "' is required");
  return *it;
}

void FieldReader::reject_unknown(std::initializer_list<const char*> known) const {
  for (const auto& item : j_.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("unknown field '" + path_of(item.key()) + "'");
  }
}

namespace {

// Runs a parser and prefixes any ConfigError with the field path.
template <typename F>
auto with_path(const std::string& path, F&& parse) {
  try {
    return parse();
  } catch (const ConfigError& e) {
    throw ConfigError("field '" + path + "': " + e.what());
  }
}

}  // namespace

Json to_json(const Architecture& arch) {
  Json j;
  j["kind"] = std::string(to_string(arch.kind));
  j["layers"] = arch.num_layers;
  j["hidden"] = arch.hidden;
  j["aggregator"] = to_string(arch.aggregator);
  j["bias"] = arch.bias;
  j["skip"] = arch.skip;
  j["dropout"] = arch.dropout;
  j["adjacency"] = std::string(to_string(arch.adjacency_mode.value_or(default_adjacency_mode(arch.kind))));
  return j;
}

Architecture architecture_from_json(const Json& j, const std::string& path) {
  FieldReader r(j, path);
  r.reject_unknown({"kind", "layers", "hidden", "aggregator", "bias", "skip", "dropout", "adjacency"});
  Architecture a;
  if (r.has("kind")) {
    a.kind = with_path(r.path_of("kind"), [&] { return parse_layer_kind(r.as<std::string>("kind")); });
  }
  a.num_layers = r.get<std::size_t>("layers", a.num_layers);
  a.hidden = r.get<std::size_t>("hidden", a.hidden);
  if (r.has("aggregator")) {
    a.aggregator = with_path(r.path_of("aggregator"),
                             [&] { return parse_aggregator(r.as<std::string>("aggregator")); });
  }
  a.bias = r.get<bool>("bias", a.bias);
  a.skip = r.get<bool>("skip", a.skip);
  a.dropout = r.get<double>("dropout", a.dropout);
  if (r.has("adjacency")) {
    a.adjacency_mode = with_path(r.path_of("adjacency"), [&] {
      return parse_adjacency_mode(r.as<std::string>("adjacency"));
    });
  }
  if (a.num_layers < 1) throw ConfigError("field '" + r.path_of("layers") + "' must be >= 1");
  if (a.hidden < 1) throw ConfigError("field '" + r.path_of("hidden") + "' must be >= 1");
  if (!(a.dropout >= 0.0 && a.dropout < 1.0)) {
    throw ConfigError("field '" + r.path_of("dropout") + "' must lie in [0, 1)");
  }
  return a;
}

Json to_json(const ModelConfig& config) {
  Json layers = Json::array();
  for (const auto& l : config.layers) {
    Json lj;
    lj["kind"] = std::string(to_string(l.kind));
    lj["in"] = l.in_dim;
    lj["out"] = l.out_dim;
    lj["activation"] = std::string(to_string(l.activation));
    lj["bias"] = l.bias;
    lj["aggregator"] = to_string(l.aggregator);
    lj["skip"] = l.skip;
    layers.push_back(lj);
  }
  Json j;
  j["layers"] = layers;
  j["dropout"] = config.dropout;
  j["adjacency"] = std::string(to_string(config.adjacency_mode));
  j["aggregation"] = config.aggregation;
  return j;
}

ModelConfig model_config_from_json(const Json& j, const std::string& path) {
  FieldReader r(j, path);
  r.reject_unknown({"layers", "dropout", "adjacency", "aggregation"});
  ModelConfig c;
  const Json& layers = r.raw("layers");
  if (!layers.is_array()) throw ConfigError("field '" + r.path_of("layers") + "': expected an array");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    FieldReader lr(layers[i], r.path_of("layers") + "[" + std::to_string(i) + "]");
    lr.reject_unknown({"kind", "in", "out", "activation", "bias", "aggregator", "skip"});
    LayerSpec s;
    s.kind = with_path(lr.path_of("kind"), [&] { return parse_layer_kind(lr.as<std::string>("kind")); });
    s.in_dim = lr.as<std::size_t>("in");
    s.out_dim = lr.as<std::size_t>("out");
    const std::string act = lr.get<std::string>("activation", "relu");
    if (act == "relu") {
      s.activation = Activation::kRelu;
    } else if (act == "none") {
      s.activation = Activation::kNone;
    } else {
      throw ConfigError("field '" + lr.path_of("activation") + "': unknown activation '" + act + "'");
    }
    s.bias = lr.get<bool>("bias", true);
    if (lr.has("aggregator")) {
      s.aggregator = with_path(lr.path_of("aggregator"),
                               [&] { return parse_aggregator(lr.as<std::string>("aggregator")); });
    }
    s.skip = lr.get<bool>("skip", false);
    c.layers.push_back(s);
  }
  c.dropout = r.get<double>("dropout", 0.0);
  if (r.has("adjacency")) {
    c.adjacency_mode = with_path(r.path_of("adjacency"), [&] {
      return parse_adjacency_mode(r.as<std::string>("adjacency"));
    });
  }
  c.aggregation = r.get<bool>("aggregation", true);
  with_path(path, [&] {
    c.validate();
    return 0;
  });
  return c;
}

Json to_json(const TrainConfig& t) {
  Json j;
  j["epochs"] = t.epochs;
  j["learning_rate"] = t.learning_rate;
  j["weight_decay"] = t.weight_decay;
  j["batch_size"] = t.batch_size;
  j["dropout"] = t.dropout ? Json(*t.dropout) : Json(nullptr);
  j["seed"] = t.seed;
  j["eval_every"] = t.eval_every;
  j["precision"] = t.precision;
  return j;
}

TrainConfig train_config_from_json(const Json& j, const std::string& path) {
  FieldReader r(j, path);
  r.reject_unknown({"epochs", "learning_rate", "weight_decay", "batch_size", "dropout", "seed",
                    "eval_every", "precision"});
  TrainConfig t;
  t.epochs = r.get<std::size_t>("epochs", t.epochs);
  t.learning_rate = r.get<double>("learning_rate", t.learning_rate);
  t.weight_decay = r.get<double>("weight_decay", t.weight_decay);
  t.batch_size = r.get<std::size_t>("batch_size", t.batch_size);
  if (r.has("dropout")) t.dropout = r.as<double>("dropout");
  t.seed = r.get<std::uint64_t>("seed", t.seed);
  t.eval_every = r.get<std::size_t>("eval_every", t.eval_every);
  t.precision = r.get<int>("precision", t.precision);
  with_path(path, [&] {
    t.validate();
    return 0;
  });
  return t;
}

Json to_json(const SyntheticConfig& c) {
  Json j;
  j["n"] = c.n;
  j["classes"] = c.c;
  j["d"] = c.d;
  j["p_in"] = c.p_in;
  j["p_out"] = c.p_out;
  j["class_sep"] = c.class_sep;
  j["lambda"] = c.lambda;
  j["seed"] = c.seed;
  return j;
}

SyntheticConfig synthetic_config_from_json(const Json& j, const std::string& path) {
  FieldReader r(j, path);
  r.reject_unknown({"n", "classes", "d", "p_in", "p_out", "class_sep", "lambda", "seed"});
  SyntheticConfig c;
  c.n = r.get<std::size_t>("n", c.n);
  c.c = r.get<int>("classes", c.c);
  c.d = r.get<std::size_t>("d", c.d);
  c.p_in = r.get<double>("p_in", c.p_in);
  c.p_out = r.get<double>("p_out", c.p_out);
  c.class_sep = r.get<double>("class_sep", c.class_sep);
  c.lambda = r.get<double>("lambda", c.lambda);
  c.seed = r.get<std::uint64_t>("seed", c.seed);
  with_path(path, [&] {
    c.validate();
    return 0;
  });
  return c;
}

Json to_json(const SplitFractions& f) {
  Json j;
  j["train"] = f.train;
  j["val"] = f.val;
  j["test"] = f.test;
  return j;
}

SplitFractions split_fractions_from_json(const Json& j, const std::string& path) {
  FieldReader r(j, path);
  r.reject_unknown({"train", "val", "test"});
  SplitFractions f;
  f.train = r.get<double>("train", f.train);
  f.val = r.get<double>("val", f.val);
  f.test = r.get<double>("test", f.test);
  return f;
}

Json to_json(const SamplerStrategy& s) {
  Json j;
  if (const auto* nb = std::get_if<NeighborSampling>(&s)) {
    j["kind"] = "neighbor";
    j["fanouts"] = nb->fanouts;
  } else if (const auto* rn = std::get_if<RandomNodeSampling>(&s)) {
    j["kind"] = "random";
    j["size"] = rn->size;
  } else {
    j["kind"] = "full";
  }
  return j;
}

SamplerStrategy sampler_from_json(const Json& j, const std::string& path) {
  FieldReader r(j, path);
  r.reject_unknown({"kind", "fanouts", "size"});
  const std::string kind = r.get<std::string>("kind", "full");
  if (kind == "full") return FullGraph{};
  if (kind == "neighbor") return NeighborSampling{r.as<std::vector<std::size_t>>("fanouts")};
  if (kind == "random") return RandomNodeSampling{r.as<std::size_t>("size")};
  throw ConfigError("field '" + r.path_of("kind") + "': unknown sampler '" + kind + "'");
}

SamplerStrategy parse_sampler(const std::string& spec) {
  if (spec == "full") return FullGraph{};
  auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto parse_count = [&](const std::string& tok) -> std::size_t {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw ConfigError("bad sampler spec '" + spec + "'");
    return static_cast<std::size_t>(v);
  };
  if (kind == "neighbor" && !rest.empty()) {
    NeighborSampling nb;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) nb.fanouts.push_back(parse_count(tok));
    return nb;
  }
  if (kind == "random" && !rest.empty()) return RandomNodeSampling{parse_count(rest)};
  throw ConfigError("bad sampler spec '" + spec + "' (expected full, neighbor:<f1,f2,..> or random:<size>)");
}

std::string to_string(const SamplerStrategy& s) {
  if (const auto* nb = std::get_if<NeighborSampling>(&s)) {
    std::string out = "neighbor:";
    for (std::size_t i = 0; i < nb->fanouts.size(); ++i) {
      out += (i ? "," : "") + std::to_string(nb->fanouts[i]);
    }
    return out;
  }
  if (const auto* rn = std::get_if<RandomNodeSampling>(&s)) return "random:" + std::to_string(rn->size);
  return "full";
}

}  // namespace mlpinit
