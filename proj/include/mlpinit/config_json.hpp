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

#include <string>

#include "json.hpp"
#include "mlpinit/graph.hpp"
#include "mlpinit/model.hpp"
#include "mlpinit/sampler.hpp"
#include "mlpinit/trainer.hpp"

namespace mlpinit {

using Json = nlohmann::ordered_json;

// Readers reject unknown keys and wrongly typed values with a ConfigError that
// names the field by its dotted path (e.g. "train.learning_rate").
Json to_json(const Architecture& arch);
Architecture architecture_from_json(const Json& j, const std::string& path = "model");

Json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const Json& j, const std::string& path = "model_config");

Json to_json(const TrainConfig& tcfg);
TrainConfig train_config_from_json(const Json& j, const std::string& path = "train");

Json to_json(const SyntheticConfig& cfg);
SyntheticConfig synthetic_config_from_json(const Json& j, const std::string& path = "synthetic");

Json to_json(const SplitFractions& f);
SplitFractions split_fractions_from_json(const Json& j, const std::string& path = "split");

Json to_json(const SamplerStrategy& s);
SamplerStrategy sampler_from_json(const Json& j, const std::string& path = "sampler");

/// "full", "neighbor:10,5" or "random:500".
SamplerStrategy parse_sampler(const std::string& spec);
std::string to_string(const SamplerStrategy& s);

// Strict view of a JSON object used by the readers above.
class FieldReader {
 public:
  FieldReader(const Json& j, std::string path);

  bool has(const std::string& key) const;
  const Json& raw(const std::string& key) const;
  std::string path_of(const std::string& key) const { return path_ + "." + key; }

  template <typename V>
  V get(const std::string& key, V fallback) const {
    if (!has(key)) return fallback;
    return as<V>(key);
  }

  template <typename V>
  V as(const std::string& key) const {
    const Json& v = raw(key);
    try {
      if constexpr (std::is_same_v<V, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("expected a boolean");
      } else if constexpr (std::is_integral_v<V>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
        if constexpr (std::is_unsigned_v<V>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.template get<long long>() < 0) {
            throw std::invalid_argument("expected a non-negative integer");
          }
        }
      } else if constexpr (std::is_floating_point_v<V>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<V, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("expected a string");
      }
      return v.template get<V>();
    } catch (const std::exception& e) {
      throw ConfigError("field '" + path_of(key) + "': " + e.what());
    }
  }

  /// Throws ConfigError for any key not in `known`.
  void reject_unknown(std::initializer_list<const char*> known) const;

 private:
  const Json& j_;
  std::string path_;
};

}  // namespace mlpinit
