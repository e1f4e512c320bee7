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

#include "mlpinit/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlpinit/errors.hpp"

namespace mlpinit {

namespace {

template <typename T>
double selected_test_metric(const TrainResult<T>& r) {
  if (r.best_epoch == 0) return r.initial.test_metric;
  for (const auto& rec : r.history) {
    if (rec.epoch == r.best_epoch) return rec.test_metric;
  }
  throw ConsistencyError("best epoch missing from history");
}

Json optional_number(std::optional<double> v) { return v ? Json(*v) : Json("---"); }

std::optional<double> read_optional_number(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "---") return std::nullopt;
    if (s == "inf") return std::numeric_limits<double>::infinity();
  }
  throw ParseError("report field '" + field + "' must be a number, \"---\" or \"inf\"");
}

Json optional_epochs(std::optional<std::size_t> v) { return v ? Json(*v) : Json("not_reached"); }

std::optional<std::size_t> read_optional_epochs(const Json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_string() && j.get<std::string>() == "not_reached") return std::nullopt;
  throw ParseError("report field '" + field + "' must be an epoch count or \"not_reached\"");
}

Json speedup_json(std::optional<double> v) {
  if (v && std::isinf(*v)) return Json("inf");
  return optional_number(v);
}

}  // namespace

std::optional<double> SeedOutcome::speedup() const {
  if (!epochs_random || !epochs_mlpinit) return std::nullopt;
  return compute_speedup(static_cast<double>(*epochs_random), static_cast<double>(*epochs_mlpinit));
}

void summarize(SpeedupReport& report) {
  report.mean_epochs_random.reset();
  report.mean_epochs_mlpinit.reset();
  report.speedup.reset();
  report.median_speedup.reset();
  report.not_reached_random = 0;
  report.not_reached_mlpinit = 0;
  report.mlp_train_wall_ms = report.gnn_wall_ms_random = report.gnn_wall_ms_mlpinit = 0.0;

  double sum_random = 0.0, sum_mlpinit = 0.0;
  std::size_t both = 0;
  std::vector<double> per_seed;
  for (const auto& s : report.seeds) {
    report.not_reached_random += s.epochs_random ? 0 : 1;
    report.not_reached_mlpinit += s.epochs_mlpinit ? 0 : 1;
    report.mlp_train_wall_ms += s.mlp_train_wall_ms;
    report.gnn_wall_ms_random += s.gnn_wall_ms_random;
    report.gnn_wall_ms_mlpinit += s.gnn_wall_ms_mlpinit;
    if (s.epochs_random && s.epochs_mlpinit) {
      sum_random += static_cast<double>(*s.epochs_random);
      sum_mlpinit += static_cast<double>(*s.epochs_mlpinit);
      ++both;
    }
    if (!s.epochs_mlpinit) {
      per_seed.push_back(0.0);
    } else if (*s.epochs_mlpinit == 0) {
      per_seed.push_back(std::numeric_limits<double>::infinity());
    } else if (s.epochs_random) {
      per_seed.push_back(static_cast<double>(*s.epochs_random) / static_cast<double>(*s.epochs_mlpinit));
    }
  }
  if (both > 0) {
    report.mean_epochs_random = sum_random / static_cast<double>(both);
    report.mean_epochs_mlpinit = sum_mlpinit / static_cast<double>(both);
    report.speedup = compute_speedup(report.mean_epochs_random, report.mean_epochs_mlpinit);
  }
  if (!per_seed.empty()) {
    std::sort(per_seed.begin(), per_seed.end());
    const std::size_t k = per_seed.size();
    report.median_speedup = k % 2 == 1 ? per_seed[k / 2] : 0.5 * (per_seed[k / 2 - 1] + per_seed[k / 2]);
  }
}

template <typename T>
SpeedupReport benchmark(const BenchmarkConfig& cfg, const Graph& graph, const Task& task,
                        const SeedCallback<T>& on_seed) {
  if (cfg.seeds.empty()) throw ConfigError("benchmark needs at least one seed");
  if (!(cfg.epsilon >= 0.0)) throw ConfigError("benchmark epsilon must be >= 0");
  SpeedupReport report;
  report.epsilon = cfg.epsilon;
  for (std::uint64_t seed : cfg.seeds) {
    TrainConfig gnn_t = cfg.gnn_train;
    TrainConfig mlp_t = cfg.mlp_train;
    gnn_t.seed = seed;
    mlp_t.seed = seed;

    TrainResult<T> random_arm =
        train_model<T>(cfg.gnn, graph, task, gnn_t, init_params<T>(cfg.gnn, seed), cfg.sampler);
    MlpInitResult<T> mlp_arm = run_mlpinit<T>(cfg.gnn, graph, task, mlp_t, gnn_t, cfg.sampler);

    SeedOutcome s;
    s.seed = seed;
    s.target = selected_test_metric(random_arm);
    s.epochs_random = epochs_to_target(random_arm.history, s.target, cfg.epsilon, &random_arm.initial);
    s.epochs_mlpinit =
        epochs_to_target(mlp_arm.gnn.history, s.target, cfg.epsilon, &mlp_arm.gnn.initial);
    s.met_at_transfer = s.epochs_mlpinit && *s.epochs_mlpinit == 0;
    s.best_metric_random = s.target;
    s.best_metric_mlpinit = selected_test_metric(mlp_arm.gnn);
    s.mlp_train_wall_ms = mlp_arm.mlp.wall_ms;
    s.gnn_wall_ms_random = random_arm.wall_ms;
    s.gnn_wall_ms_mlpinit = mlp_arm.gnn.wall_ms;
    report.seeds.push_back(s);
    if (on_seed) on_seed(seed, random_arm, mlp_arm);
  }
  report.configs["gnn"] = to_json(cfg.gnn);
  report.configs["gnn_train"] = to_json(cfg.gnn_train);
  report.configs["mlp_train"] = to_json(cfg.mlp_train);
  report.configs["sampler"] = to_json(cfg.sampler);
  report.configs["seeds"] = cfg.seeds;
  summarize(report);
  return report;
}

Json to_json(const SpeedupReport& r) {
  Json seeds = Json::array();
  for (const auto& s : r.seeds) {
    Json j;
    j["seed"] = s.seed;
    j["target"] = s.target;
    j["epochs_random"] = optional_epochs(s.epochs_random);
    j["epochs_mlpinit"] = optional_epochs(s.epochs_mlpinit);
    j["met_at_transfer"] = s.met_at_transfer;
    j["speedup"] = optional_number(s.speedup());
    j["best_metric_random"] = s.best_metric_random;
    j["best_metric_mlpinit"] = s.best_metric_mlpinit;
    j["mlp_train_wall_ms"] = s.mlp_train_wall_ms;
    j["gnn_wall_ms_random"] = s.gnn_wall_ms_random;
    j["gnn_wall_ms_mlpinit"] = s.gnn_wall_ms_mlpinit;
    seeds.push_back(j);
  }
  Json j;
  j["epsilon"] = r.epsilon;
  j["per_seed"] = seeds;
  j["mean_epochs_random"] = optional_number(r.mean_epochs_random);
  j["mean_epochs_mlpinit"] = optional_number(r.mean_epochs_mlpinit);
  j["speedup"] = speedup_json(r.speedup);
  j["speedup_display"] = format_speedup(r.speedup);
  j["median_speedup"] = speedup_json(r.median_speedup);
  j["not_reached_random"] = r.not_reached_random;
  j["not_reached_mlpinit"] = r.not_reached_mlpinit;
  j["mlp_train_wall_ms"] = r.mlp_train_wall_ms;
  j["gnn_wall_ms_random"] = r.gnn_wall_ms_random;
  j["gnn_wall_ms_mlpinit"] = r.gnn_wall_ms_mlpinit;
  j["configs"] = r.configs;
  return j;
}

SpeedupReport speedup_report_from_json(const Json& j) {
  try {
    SpeedupReport r;
    r.epsilon = j.at("epsilon").get<double>();
    for (const auto& sj : j.at("per_seed")) {
      SeedOutcome s;
      s.seed = sj.at("seed").get<std::uint64_t>();
      s.target = sj.at("target").get<double>();
      s.epochs_random = read_optional_epochs(sj.at("epochs_random"), "epochs_random");
      s.epochs_mlpinit = read_optional_epochs(sj.at("epochs_mlpinit"), "epochs_mlpinit");
      s.met_at_transfer = sj.at("met_at_transfer").get<bool>();
      s.best_metric_random = sj.at("best_metric_random").get<double>();
      s.best_metric_mlpinit = sj.at("best_metric_mlpinit").get<double>();
      s.mlp_train_wall_ms = sj.at("mlp_train_wall_ms").get<double>();
      s.gnn_wall_ms_random = sj.at("gnn_wall_ms_random").get<double>();
      s.gnn_wall_ms_mlpinit = sj.at("gnn_wall_ms_mlpinit").get<double>();
      r.seeds.push_back(s);
    }
    r.mean_epochs_random = read_optional_number(j.at("mean_epochs_random"), "mean_epochs_random");
    r.mean_epochs_mlpinit = read_optional_number(j.at("mean_epochs_mlpinit"), "mean_epochs_mlpinit");
    r.speedup = read_optional_number(j.at("speedup"), "speedup");
    r.median_speedup = read_optional_number(j.at("median_speedup"), "median_speedup");
    r.not_reached_random = j.at("not_reached_random").get<std::size_t>();
    r.not_reached_mlpinit = j.at("not_reached_mlpinit").get<std::size_t>();
    r.mlp_train_wall_ms = j.at("mlp_train_wall_ms").get<double>();
    r.gnn_wall_ms_random = j.at("gnn_wall_ms_random").get<double>();
    r.gnn_wall_ms_mlpinit = j.at("gnn_wall_ms_mlpinit").get<double>();
    r.configs = j.at("configs");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed speedup report: ") + e.what());
  }
}

template SpeedupReport benchmark(const BenchmarkConfig&, const Graph&, const Task&,
                                 const SeedCallback<float>&);
template SpeedupReport benchmark(const BenchmarkConfig&, const Graph&, const Task&,
                                 const SeedCallback<double>&);

}  // namespace mlpinit
