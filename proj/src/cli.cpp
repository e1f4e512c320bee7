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

#include "mlpinit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include "mlpinit/analysis.hpp"
#include "mlpinit/benchmark.hpp"
#include "mlpinit/errors.hpp"
#include "mlpinit/graph_io.hpp"
#include "mlpinit/param_io.hpp"

namespace mlpinit {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// RunConfig <-> JSON

namespace {

Json edge_split_json(const EdgeSplitFractions& f) {
  Json j;
  j["train"] = f.train;
  j["val"] = f.val;
  j["test"] = f.test;
  return j;
}

EdgeSplitFractions edge_split_from_json(const Json& j, const std::string& path) {
  FieldReader r(j, path);
  r.reject_unknown({"train", "val", "test"});
  EdgeSplitFractions f;
  f.train = r.get<double>("train", f.train);
  f.val = r.get<double>("val", f.val);
  f.test = r.get<double>("test", f.test);
  return f;
}

}  // namespace

Json to_json(const RunConfig& c) {
  Json j;
  j["task"] = c.task;
  Json data;
  if (c.data_dir) {
    data["path"] = *c.data_dir;
  } else {
    data["synthetic"] = to_json(c.synthetic);
    data["split"] = to_json(c.split);
  }
  j["dataset"] = data;
  j["model"] = to_json(c.model);
  j["embedding_dim"] = c.embedding_dim;
  j["arm"] = c.arm;
  j["train"] = to_json(c.train);
  j["mlp_train"] = to_json(c.mlp_train);
  j["sampler"] = to_json(c.sampler);
  j["benchmark"] = {{"seeds", c.seeds}, {"epsilon", c.epsilon}};
  j["link"] = {{"edge_split", edge_split_json(c.edge_split)},
               {"neg_per_pos", c.neg_per_pos},
               {"hits_mode", std::string(to_string(c.hits_mode))}};
  j["analysis"] = {{"half_range", c.grid.half_range},
                   {"steps", c.grid.steps},
                   {"low_loss_delta", c.low_loss_delta},
                   {"bins", c.hist_bins},
                   {"range", {c.hist_lo, c.hist_hi}},
                   {"include_bias", c.hist_include_bias}};
  j["arms"] = c.arms;
  j["sweep"] = {{"layers", c.sweep_layers}, {"hidden", c.sweep_hidden},  {"lr", c.sweep_lr},
                {"wd", c.sweep_wd},         {"batch", c.sweep_batch},    {"dropout", c.sweep_dropout}};
  j["seed"] = c.seed;
  j["out"] = c.out;
  return j;
}

RunConfig run_config_from_json(const Json& input) {
  const Json* body = &input;
  if (input.is_object() && input.contains("config") && input.contains("command")) {
    body = &input.at("config");
  }
  FieldReader r(*body, "config");
  r.reject_unknown({"task", "dataset", "model", "embedding_dim", "arm", "train", "mlp_train", "sampler",
                    "benchmark", "link", "analysis", "arms", "sweep", "seed", "out"});
  RunConfig c;
  c.task = r.get<std::string>("task", c.task);
  if (r.has("dataset")) {
    FieldReader d(r.raw("dataset"), "dataset");
    d.reject_unknown({"path", "synthetic", "split"});
    if (d.has("path")) c.data_dir = d.as<std::string>("path");
    if (d.has("synthetic")) c.synthetic = synthetic_config_from_json(d.raw("synthetic"), "dataset.synthetic");
    if (d.has("split")) c.split = split_fractions_from_json(d.raw("split"), "dataset.split");
  }
  if (r.has("model")) c.model = architecture_from_json(r.raw("model"), "model");
  c.embedding_dim = r.get<std::size_t>("embedding_dim", c.embedding_dim);
  c.arm = r.get<std::string>("arm", c.arm);
  if (r.has("train")) c.train = train_config_from_json(r.raw("train"), "train");
  if (r.has("mlp_train")) c.mlp_train = train_config_from_json(r.raw("mlp_train"), "mlp_train");
  if (r.has("sampler")) c.sampler = sampler_from_json(r.raw("sampler"), "sampler");
  if (r.has("benchmark")) {
    FieldReader b(r.raw("benchmark"), "benchmark");
    b.reject_unknown({"seeds", "epsilon"});
    c.seeds = b.get<std::vector<std::uint64_t>>("seeds", c.seeds);
    c.epsilon = b.get<double>("epsilon", c.epsilon);
  }
  if (r.has("link")) {
    FieldReader l(r.raw("link"), "link");
    l.reject_unknown({"edge_split", "neg_per_pos", "hits_mode"});
    if (l.has("edge_split")) c.edge_split = edge_split_from_json(l.raw("edge_split"), "link.edge_split");
    c.neg_per_pos = l.get<std::size_t>("neg_per_pos", c.neg_per_pos);
    if (l.has("hits_mode")) c.hits_mode = parse_hits_mode(l.as<std::string>("hits_mode"));
  }
  if (r.has("analysis")) {
    FieldReader a(r.raw("analysis"), "analysis");
    a.reject_unknown({"half_range", "steps", "low_loss_delta", "bins", "range", "include_bias"});
    c.grid.half_range = a.get<double>("half_range", c.grid.half_range);
    c.grid.steps = a.get<std::size_t>("steps", c.grid.steps);
    c.low_loss_delta = a.get<double>("low_loss_delta", c.low_loss_delta);
    c.hist_bins = a.get<std::size_t>("bins", c.hist_bins);
    if (a.has("range")) {
      auto range = a.as<std::vector<double>>("range");
      if (range.size() != 2) throw ConfigError("field 'analysis.range' must hold [lo, hi]");
      c.hist_lo = range[0];
      c.hist_hi = range[1];
    }
    c.hist_include_bias = a.get<bool>("include_bias", c.hist_include_bias);
  }
  c.arms = r.get<std::vector<std::string>>("arms", c.arms);
  if (r.has("sweep")) {
    FieldReader s(r.raw("sweep"), "sweep");
    s.reject_unknown({"layers", "hidden", "lr", "wd", "batch", "dropout"});
    c.sweep_layers = s.get<std::vector<std::size_t>>("layers", c.sweep_layers);
    c.sweep_hidden = s.get<std::vector<std::size_t>>("hidden", c.sweep_hidden);
    c.sweep_lr = s.get<std::vector<double>>("lr", c.sweep_lr);
    c.sweep_wd = s.get<std::vector<double>>("wd", c.sweep_wd);
    c.sweep_batch = s.get<std::vector<std::size_t>>("batch", c.sweep_batch);
    c.sweep_dropout = s.get<std::vector<double>>("dropout", c.sweep_dropout);
  }
  c.seed = r.get<std::uint64_t>("seed", c.seed);
  c.out = r.get<std::string>("out", c.out);
  return c;
}

// ---------------------------------------------------------------------------
// Shared plumbing

namespace {

struct Context {
  std::string command;
  RunConfig cfg;
  fs::path out_dir;
  std::ostream& log;
};

double round6(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

Json metric_json(double v) {
  if (std::isinf(v)) return Json(v > 0 ? "inf" : "-inf");
  if (std::isnan(v)) return Json("nan");
  return Json(round6(v));
}

Json rank_json(const RankMetrics& m) {
  Json j;
  j["auc"] = metric_json(m.auc);
  j["ap"] = metric_json(m.ap);
  for (const auto& [k, v] : m.hits) j["hits@" + std::to_string(k)] = metric_json(v);
  return j;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

void write_curve(const fs::path& path, const std::vector<EpochRecord>& history, const EpochRecord& initial) {
  std::ostringstream s;
  write_history(s, history, &initial);
  write_file(path, s.str());
}

Graph load_dataset(const RunConfig& c) {
  if (c.data_dir) {
    if (!fs::is_directory(*c.data_dir)) {
      throw ConfigError("field 'dataset.path': directory '" + *c.data_dir + "' does not exist");
    }
    return load_graph(DatasetPaths::in_directory(*c.data_dir));
  }
  Graph g = generate_synthetic(c.synthetic);
  g.splits = split_nodes(g.num_nodes(), c.split, c.synthetic.seed);
  return g;
}

Task make_task(const RunConfig& c, const Graph& g) {
  if (c.task == "link") {
    return LinkPrediction{std::make_shared<EdgeSplit>(split_edges(g, c.edge_split, c.neg_per_pos, c.seed))};
  }
  return NodeClassification{};
}

ModelConfig make_model(const RunConfig& c, const Graph& g) {
  const std::size_t out = c.task == "link" ? c.embedding_dim : static_cast<std::size_t>(g.num_classes);
  return build_model(c.model, g.feature_dim(), out);
}

TrainConfig gnn_train(const RunConfig& c, std::uint64_t seed) {
  TrainConfig t = c.train;
  t.seed = seed;
  return t;
}

TrainConfig mlp_train(const RunConfig& c, std::uint64_t seed) {
  TrainConfig t = c.mlp_train;
  t.seed = seed;
  t.precision = c.train.precision;
  return t;
}

void validate(const RunConfig& c) {
  if (c.task != "node" && c.task != "link") throw ConfigError("field 'task' must be node or link");
  if (c.arm != "gnn" && c.arm != "peermlp") throw ConfigError("field 'arm' must be gnn or peermlp");
  if (c.embedding_dim < 1) throw ConfigError("field 'embedding_dim' must be >= 1");
  if (c.seeds.empty()) throw ConfigError("field 'benchmark.seeds' must not be empty");
  if (!(c.epsilon >= 0.0)) throw ConfigError("field 'benchmark.epsilon' must be >= 0");
  if (c.neg_per_pos < 1) throw ConfigError("field 'link.neg_per_pos' must be >= 1");
  if (c.hist_bins < 1) throw ConfigError("field 'analysis.bins' must be >= 1");
  if (!(c.hist_hi > c.hist_lo)) throw ConfigError("field 'analysis.range' must satisfy lo < hi");
  if (c.grid.steps < 3 || c.grid.steps % 2 == 0) throw ConfigError("field 'analysis.steps' must be odd and >= 3");
  if (c.out.empty()) throw ConfigError("field 'out' must not be empty");
  c.train.validate();
  c.mlp_train.validate();
  if (!c.data_dir) c.synthetic.validate();
  for (const auto& a : c.arms) {
    if (a != "random" && a != "mlpinit") throw ConfigError("field 'arms': unknown arm '" + a + "'");
  }
}

std::vector<std::string> arms_or(const RunConfig& c, std::vector<std::string> fallback) {
  return c.arms.empty() ? fallback : c.arms;
}

template <typename T>
Json selection_json(const TrainResult<T>& r) {
  const EpochRecord* sel = &r.initial;
  for (const auto& rec : r.history) {
    if (rec.epoch == r.best_epoch) sel = &rec;
  }
  Json j;
  j["best_epoch"] = r.best_epoch;
  j["val_metric"] = metric_json(sel->val_metric);
  j["test_metric"] = metric_json(sel->test_metric);
  j["train_loss"] = metric_json(sel->train_loss);
  return j;
}

// One trained arm of the GNN: random init, or the MLPInit pipeline.
template <typename T>
struct ArmRun {
  TrainResult<T> gnn;
  std::optional<MlpInitResult<T>> pipeline;
};

template <typename T>
ArmRun<T> run_arm(const std::string& arm, const RunConfig& c, const ModelConfig& model,
                  const Graph& g, const Task& task, std::uint64_t seed,
                  const TrainHooks<T>& mlp_hooks = {}, const TrainHooks<T>& gnn_hooks = {}) {
  ArmRun<T> r;
  if (arm == "random") {
    r.gnn = train_model<T>(model, g, task, gnn_train(c, seed), init_params<T>(model, seed), c.sampler, gnn_hooks);
  } else {
    r.pipeline = run_mlpinit<T>(model, g, task, mlp_train(c, seed), gnn_train(c, seed), c.sampler,
                                mlp_hooks, gnn_hooks);
    r.gnn = r.pipeline->gnn;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_synth(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  Graph g = generate_synthetic(c.synthetic);
  g.splits = split_nodes(g.num_nodes(), c.split, c.synthetic.seed);
  write_graph(g, DatasetPaths::in_directory(ctx.out_dir));
  ctx.log << "wrote synthetic graph: " << g.num_nodes() << " nodes, " << g.num_edges() << " edges, "
          << g.num_classes << " classes\n";
}

template <typename T>
void cmd_train(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Graph g = load_dataset(c);
  const Task task = make_task(c, g);
  ModelConfig model = make_model(c, g);
  if (c.arm == "peermlp") model = derive_peermlp(model);
  const TrainConfig t = c.arm == "peermlp" ? mlp_train(c, c.seed) : gnn_train(c, c.seed);
  auto r = train_model<T>(model, g, task, t, init_params<T>(model, c.seed), c.sampler);
  write_curve(ctx.out_dir / (c.arm + "_" + std::to_string(c.seed) + ".curve"), r.history, r.initial);
  save_params(r.best_params, ctx.out_dir / "best_params.bin");
  save_params(r.final_params, ctx.out_dir / "final_params.bin");
  Json m = selection_json(r);
  if (c.task == "link") m["test_rank"] = rank_json(Evaluator<T>(model, g, task).link_metrics(r.best_params, true, c.hits_mode));
  write_json(ctx.out_dir / "metrics.json", m);
  ctx.log << c.arm << ": best epoch " << r.best_epoch << ", test metric " << m["test_metric"] << "\n";
}

template <typename T>
void cmd_mlpinit(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Graph g = load_dataset(c);
  const Task task = make_task(c, g);
  const ModelConfig model = make_model(c, g);
  auto r = run_mlpinit<T>(model, g, task, mlp_train(c, c.seed), gnn_train(c, c.seed), c.sampler);
  const std::string s = std::to_string(c.seed);
  write_curve(ctx.out_dir / ("peermlp_" + s + ".curve"), r.mlp.history, r.mlp.initial);
  write_curve(ctx.out_dir / ("mlpinit_" + s + ".curve"), r.gnn.history, r.gnn.initial);
  save_params(r.mlp.best_params, ctx.out_dir / "peermlp_best.bin");
  save_params(r.best_params, ctx.out_dir / "best_params.bin");
  Json m;
  m["peermlp"] = selection_json(r.mlp);
  m["gnn"] = selection_json(r.gnn);
  Evaluator<T> ev(model, g, task);
  m["gnn_at_transfer"] = {{"val_metric", metric_json(r.gnn.initial.val_metric)},
                          {"test_metric", metric_json(r.gnn.initial.test_metric)},
                          {"train_loss", metric_json(r.gnn.initial.train_loss)}};
  if (c.task == "link") m["test_rank"] = rank_json(ev.link_metrics(r.best_params, true, c.hits_mode));
  write_json(ctx.out_dir / "metrics.json", m);
  ctx.log << "mlpinit: PeerMLP best epoch " << r.mlp.best_epoch << ", GNN best epoch " << r.gnn.best_epoch
          << "\n";
}

template <typename T>
void cmd_bench(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Graph g = load_dataset(c);
  const Task task = make_task(c, g);
  BenchmarkConfig b;
  b.gnn = make_model(c, g);
  b.gnn_train = gnn_train(c, c.seed);
  b.mlp_train = mlp_train(c, c.seed);
  b.seeds = c.seeds;
  b.epsilon = c.epsilon;
  b.sampler = c.sampler;
  SeedCallback<T> on_seed = [&](std::uint64_t seed, const TrainResult<T>& rnd, const MlpInitResult<T>& mi) {
    const std::string s = std::to_string(seed);
    write_curve(ctx.out_dir / ("random_" + s + ".curve"), rnd.history, rnd.initial);
    write_curve(ctx.out_dir / ("mlpinit_" + s + ".curve"), mi.gnn.history, mi.gnn.initial);
    write_curve(ctx.out_dir / ("peermlp_" + s + ".curve"), mi.mlp.history, mi.mlp.initial);
  };
  SpeedupReport report = benchmark<T>(b, g, task, on_seed);
  write_json(ctx.out_dir / "report.json", to_json(report));
  ctx.log << "speedup " << format_speedup(report.speedup) << "x (median per-seed "
          << (report.median_speedup ? format_speedup(report.median_speedup) : "---") << "x) over "
          << report.seeds.size() << " seeds\n";
}

template <typename T>
void cmd_linkpred(Context& ctx) {
  RunConfig c = ctx.cfg;
  c.task = "link";
  const Graph g = load_dataset(c);
  const Task task = make_task(c, g);
  const ModelConfig model = make_model(c, g);
  Evaluator<T> ev(model, g, task);
  Json out;
  out["hits_mode"] = std::string(to_string(c.hits_mode));
  for (const auto& arm : arms_or(c, {"random", "mlpinit"})) {
    auto r = run_arm<T>(arm, c, model, g, task, c.seed);
    write_curve(ctx.out_dir / (arm + "_" + std::to_string(c.seed) + ".curve"), r.gnn.history, r.gnn.initial);
    Json a = selection_json(r.gnn);
    a["test"] = rank_json(ev.link_metrics(r.gnn.best_params, true, c.hits_mode));
    a["val"] = rank_json(ev.link_metrics(r.gnn.best_params, false, c.hits_mode));
    out[arm] = a;
    ctx.log << arm << ": test AUC " << a["test"]["auc"] << ", Hits@10 " << a["test"]["hits@10"] << "\n";
  }
  write_json(ctx.out_dir / "linkpred.json", out);
}

template <typename T>
void cmd_landscape(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Graph g = load_dataset(c);
  const Task task = make_task(c, g);
  const ModelConfig model = make_model(c, g);
  Evaluator<T> ev(model, g, task);
  Json summary;
  summary["direction_seed"] = c.seed;
  summary["half_range"] = c.grid.half_range;
  summary["steps"] = c.grid.steps;
  summary["low_loss_delta"] = c.low_loss_delta;
  Json shapes = Json::array();
  for (const auto& s : param_shapes(model)) shapes.push_back({{"name", s.name}, {"dims", s.dims}});
  summary["direction_shapes"] = shapes;
  for (const auto& arm : arms_or(c, {"random", "mlpinit"})) {
    auto r = run_arm<T>(arm, c, model, g, task, c.seed);
    const auto dirs = filter_normalized_directions(r.gnn.best_params, c.seed);
    const LandscapeGrid grid = loss_grid(ev, r.gnn.best_params, dirs, c.grid);
    std::ostringstream s;
    write_landscape(s, grid);
    write_file(ctx.out_dir / ("landscape_" + arm + ".csv"), s.str());
    double lowest = grid.base_loss;
    for (double l : grid.losses.values()) lowest = std::min(lowest, l);
    summary[arm] = {{"base_loss", metric_json(grid.base_loss)},
                    {"min_loss", metric_json(lowest)},
                    {"low_loss_fraction", metric_json(low_loss_fraction(grid, c.low_loss_delta))}};
    ctx.log << arm << ": base loss " << summary[arm]["base_loss"] << ", low-loss fraction "
            << summary[arm]["low_loss_fraction"] << "\n";
  }
  write_json(ctx.out_dir / "landscape.json", summary);
}

template <typename T>
void cmd_trajectory(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Graph g = load_dataset(c);
  const Task task = make_task(c, g);
  const ModelConfig model = make_model(c, g);
  std::vector<ParamSet<T>> snaps;
  std::vector<std::size_t> epochs;
  std::vector<std::string> phases;
  auto collect = [&](const char* phase) {
    return TrainHooks<T>{[&, phase](std::size_t epoch, const ParamSet<T>& p) {
      snaps.push_back(p);
      epochs.push_back(epoch);
      phases.emplace_back(phase);
    }};
  };
  run_mlpinit<T>(model, g, task, mlp_train(c, c.seed), gnn_train(c, c.seed), c.sampler, collect("mlp"),
                 collect("gnn"));
  Trajectory t = pca_project(snaps);
  t.epochs = epochs;
  t.phases = phases;
  std::ostringstream s;
  write_trajectory(s, t);
  write_file(ctx.out_dir / "trajectory.csv", s.str());
  write_json(ctx.out_dir / "trajectory.json",
             {{"snapshots", snaps.size()},
              {"explained_variance", {metric_json(t.explained_variance[0]), metric_json(t.explained_variance[1])}}});
  ctx.log << "trajectory: " << snaps.size() << " snapshots, explained variance "
          << round6(t.explained_variance[0]) << ", " << round6(t.explained_variance[1]) << "\n";
}

template <typename T>
void cmd_hist(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Graph g = load_dataset(c);
  const Task task = make_task(c, g);
  const ModelConfig model = make_model(c, g);
  for (const auto& arm : arms_or(c, {"random", "mlpinit"})) {
    auto r = run_arm<T>(arm, c, model, g, task, c.seed);
    auto counts = weight_histogram(r.gnn.final_params, c.hist_bins, c.hist_lo, c.hist_hi, c.hist_include_bias);
    std::ostringstream s;
    write_histogram(s, counts, c.hist_lo, c.hist_hi);
    write_file(ctx.out_dir / ("hist_" + arm + ".csv"), s.str());
  }
  ctx.log << "hist: wrote " << arms_or(c, {"random", "mlpinit"}).size() << " histograms\n";
}

std::string num_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

template <typename T>
void cmd_sweep(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Graph g = load_dataset(c);
  const Task task = make_task(c, g);
  auto or_one = [](auto list, auto value) {
    if (list.empty()) list.push_back(value);
    return list;
  };
  const auto lrs = or_one(c.sweep_lr, c.train.learning_rate);
  const auto wds = or_one(c.sweep_wd, c.train.weight_decay);
  const auto batches = or_one(c.sweep_batch, c.train.batch_size);
  const auto dropouts = or_one(c.sweep_dropout, c.model.dropout);
  if (c.sweep_layers.empty() || c.sweep_hidden.empty()) throw ConfigError("field 'sweep': empty grid");
  Json rows = Json::array();
  for (auto layers : c.sweep_layers) {
    for (auto hidden : c.sweep_hidden) {
      for (double lr : lrs) {
        for (double wd : wds) {
          for (auto batch : batches) {
            for (double dropout : dropouts) {
              RunConfig rc = c;
              rc.model.num_layers = layers;
              rc.model.hidden = hidden;
              rc.model.dropout = dropout;
              rc.train.learning_rate = rc.mlp_train.learning_rate = lr;
              rc.train.weight_decay = rc.mlp_train.weight_decay = wd;
              rc.train.batch_size = rc.mlp_train.batch_size = batch;
              const ModelConfig model = make_model(rc, g);
              const std::string combo = "L" + std::to_string(layers) + "_H" + std::to_string(hidden) +
                                        "_lr" + num_label(lr) + "_wd" + num_label(wd) + "_bs" +
                                        std::to_string(batch) + "_do" + num_label(dropout);
              for (const auto& arm : arms_or(c, {"mlpinit"})) {
                auto r = run_arm<T>(arm, rc, model, g, task, c.seed);
                const std::string file = arm + "_" + combo + "_" + std::to_string(c.seed) + ".curve";
                write_curve(ctx.out_dir / file, r.gnn.history, r.gnn.initial);
                Json row = selection_json(r.gnn);
                row["arm"] = arm;
                row["layers"] = layers;
                row["hidden"] = hidden;
                row["lr"] = lr;
                row["weight_decay"] = wd;
                row["batch_size"] = batch;
                row["dropout"] = dropout;
                row["curve"] = file;
                rows.push_back(row);
              }
            }
          }
        }
      }
    }
  }
  write_json(ctx.out_dir / "sweep.json", rows);
  ctx.log << "sweep: " << rows.size() << " runs\n";
}

// ---------------------------------------------------------------------------
// Flag registration

// Flags are bound to scratch values and applied to the loaded config only
// when given on the command line.
class Overrides {
 public:
  template <typename V>
  CLI::Option* add(CLI::App* app, const std::string& names, const std::string& desc,
                   std::function<void(RunConfig&, const V&)> apply) {
    auto value = std::make_shared<V>();
    CLI::Option* opt = app->add_option(names, *value, desc);
    if constexpr (requires { typename V::value_type; } && !std::is_same_v<V, std::string>) {
      opt->delimiter(',');
    }
    appliers_.push_back([opt, value, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c, *value);
    });
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& names, const std::string& desc,
                    std::function<void(RunConfig&)> apply) {
    CLI::Option* opt = app->add_flag(names, desc);
    appliers_.push_back([opt, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c);
    });
    return opt;
  }

  void apply(RunConfig& c) const {
    for (const auto& a : appliers_) a(c);
  }

 private:
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

template <typename V>
std::function<void(RunConfig&, const V&)> set(V RunConfig::*field) {
  return [field](RunConfig& c, const V& v) { c.*field = v; };
}

void add_common(CLI::App* app, Overrides& o) {
  o.add<std::string>(app, "--out", "Output directory", set(&RunConfig::out));
  o.add<int>(app, "--precision", "Floating-point precision: 32 or 64",
             [](RunConfig& c, const int& v) { c.train.precision = c.mlp_train.precision = v; });
}

void add_dataset(CLI::App* app, Overrides& o, bool synth_only) {
  if (!synth_only) {
    o.add<std::string>(app, "--data", "Dataset directory (edges.txt, features.bin, labels.txt, splits.json)",
                       [](RunConfig& c, const std::string& v) { c.data_dir = v; });
    o.add<std::uint64_t>(app, "--data-seed", "Seed of the generated synthetic graph",
                         [](RunConfig& c, const std::uint64_t& v) { c.synthetic.seed = v; });
  }
  o.add<std::size_t>(app, "--n", "Synthetic: number of nodes", [](RunConfig& c, const std::size_t& v) { c.synthetic.n = v; });
  o.add<int>(app, "--classes", "Synthetic: number of classes", [](RunConfig& c, const int& v) { c.synthetic.c = v; });
  o.add<std::size_t>(app, "--d,--dim", "Synthetic: feature dimension", [](RunConfig& c, const std::size_t& v) { c.synthetic.d = v; });
  o.add<double>(app, "--p-in", "Synthetic: intra-class edge probability", [](RunConfig& c, const double& v) { c.synthetic.p_in = v; });
  o.add<double>(app, "--p-out", "Synthetic: inter-class edge probability", [](RunConfig& c, const double& v) { c.synthetic.p_out = v; });
  o.add<double>(app, "--class-sep", "Synthetic: norm of class-mean feature offsets",
                [](RunConfig& c, const double& v) { c.synthetic.class_sep = v; });
  o.add<double>(app, "--lambda", "Synthetic: feature/noise mixing weight in [0,1]",
                [](RunConfig& c, const double& v) { c.synthetic.lambda = v; });
  o.add<std::vector<double>>(app, "--split", "Node split fractions train,val,test",
                             [](RunConfig& c, const std::vector<double>& v) {
                               if (v.size() != 3) throw ConfigError("--split needs three fractions");
                               c.split = {v[0], v[1], v[2]};
                             });
}

void add_model(CLI::App* app, Overrides& o, bool with_shape) {
  o.add<std::string>(app, "--task", "node or link", set(&RunConfig::task));
  o.add<std::string>(app, "--model", "Layer kind: gcn or sage",
                     [](RunConfig& c, const std::string& v) {
                       c.model.kind = parse_layer_kind(v);
                     });
  if (with_shape) {
    o.add<std::size_t>(app, "--layers", "Number of layers", [](RunConfig& c, const std::size_t& v) { c.model.num_layers = v; });
    o.add<std::size_t>(app, "--hidden", "Hidden width", [](RunConfig& c, const std::size_t& v) { c.model.hidden = v; });
    o.add<double>(app, "--dropout", "Dropout rate", [](RunConfig& c, const double& v) { c.model.dropout = v; });
  }
  o.add<std::string>(app, "--aggregator", "sage aggregator: mean, max, median, softmax[:t]",
                     [](RunConfig& c, const std::string& v) { c.model.aggregator = parse_aggregator(v); });
  o.add<std::string>(app, "--adjacency", "Adjacency normalization: raw, row_mean, sym_selfloop",
                     [](RunConfig& c, const std::string& v) { c.model.adjacency_mode = parse_adjacency_mode(v); });
  o.flag(app, "--skip", "Residual connection on equal-width layers", [](RunConfig& c) { c.model.skip = true; });
  o.flag(app, "--no-bias", "Drop layer biases", [](RunConfig& c) { c.model.bias = false; });
  o.add<std::size_t>(app, "--embedding-dim", "Output width for the link task", set(&RunConfig::embedding_dim));
  o.add<std::string>(app, "--sampler", "full, neighbor:<f1,f2,..> or random:<size>",
                     [](RunConfig& c, const std::string& v) { c.sampler = parse_sampler(v); });
}

void add_training(CLI::App* app, Overrides& o, bool with_rates) {
  o.add<std::uint64_t>(app, "--seed", "Root seed", set(&RunConfig::seed));
  o.add<std::size_t>(app, "--epochs,--gnn-epochs", "GNN epochs (n)", [](RunConfig& c, const std::size_t& v) { c.train.epochs = v; });
  o.add<std::size_t>(app, "--mlp-epochs", "PeerMLP epochs (m)", [](RunConfig& c, const std::size_t& v) { c.mlp_train.epochs = v; });
  if (with_rates) {
    o.add<double>(app, "--lr", "GNN learning rate", [](RunConfig& c, const double& v) { c.train.learning_rate = v; });
    o.add<double>(app, "--weight-decay", "GNN weight decay", [](RunConfig& c, const double& v) { c.train.weight_decay = v; });
    o.add<std::size_t>(app, "--batch-size", "GNN batch size (0 = full batch)",
                       [](RunConfig& c, const std::size_t& v) { c.train.batch_size = v; });
  }
  o.add<double>(app, "--mlp-lr", "PeerMLP learning rate", [](RunConfig& c, const double& v) { c.mlp_train.learning_rate = v; });
  o.add<double>(app, "--mlp-weight-decay", "PeerMLP weight decay",
                [](RunConfig& c, const double& v) { c.mlp_train.weight_decay = v; });
  o.add<std::size_t>(app, "--mlp-batch-size", "PeerMLP batch size (0 = full batch)",
                     [](RunConfig& c, const std::size_t& v) { c.mlp_train.batch_size = v; });
  o.add<std::size_t>(app, "--eval-every", "Epochs between evaluations",
                     [](RunConfig& c, const std::size_t& v) { c.train.eval_every = c.mlp_train.eval_every = v; });
  o.add<std::size_t>(app, "--neg-per-pos", "Link task: evaluation negatives per positive", set(&RunConfig::neg_per_pos));
  o.add<std::string>(app, "--hits-mode", "Link task: shared or per-positive negatives for Hits@K",
                     [](RunConfig& c, const std::string& v) { c.hits_mode = parse_hits_mode(v); });
}

void add_arms(CLI::App* app, Overrides& o) {
  o.add<std::vector<std::string>>(app, "--arms", "Arms to run: random, mlpinit", set(&RunConfig::arms));
}

const char* kFooter =
    "Precedence: command-line flags > --config file fields > built-in defaults.\n"
    "--config accepts a config object or a manifest.json written by an earlier run.\n"
    "Thread count: MLPINIT_NUM_THREADS (default 1).";

using Runner = std::function<void(Context&)>;

template <template <typename> class>
struct Tag {};

#define MLPINIT_DISPATCH(fn)                                                     \
  [](Context& ctx) {                                                             \
    if (ctx.cfg.train.precision == 64) {                                         \
      fn<double>(ctx);                                                           \
    } else {                                                                     \
      fn<float>(ctx);                                                            \
    }                                                                            \
  }

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MLPInit: train GNNs from PeerMLP weights, benchmark and analyse them", "mlpinit"};
  app.footer(kFooter);
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    Overrides overrides;
    Runner run;
    std::string config_path;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto add_sub = [&](const std::string& name, const std::string& desc, Runner run) -> Sub& {
    auto s = std::make_unique<Sub>();
    s->app = app.add_subcommand(name, desc);
    s->app->footer(kFooter);
    s->app->add_option("--config", s->config_path, "JSON config or manifest.json");
    s->run = std::move(run);
    subs.push_back(std::move(s));
    return *subs.back();
  };

  {
    Sub& s = add_sub("synth", "Write a synthetic planted-partition dataset", cmd_synth);
    add_common(s.app, s.overrides);
    add_dataset(s.app, s.overrides, true);
    s.overrides.add<std::uint64_t>(s.app, "--seed", "Seed of the generated graph",
                                   [](RunConfig& c, const std::uint64_t& v) { c.synthetic.seed = c.seed = v; });
  }
  {
    Sub& s = add_sub("train", "Train one arm (gnn or peermlp) from random init", MLPINIT_DISPATCH(cmd_train));
    add_common(s.app, s.overrides);
    add_dataset(s.app, s.overrides, false);
    add_model(s.app, s.overrides, true);
    add_training(s.app, s.overrides, true);
    s.overrides.add<std::string>(s.app, "--arm", "gnn or peermlp", set(&RunConfig::arm));
  }
  auto standard = [&](const std::string& name, const std::string& desc, Runner run, bool arms) {
    Sub& s = add_sub(name, desc, std::move(run));
    add_common(s.app, s.overrides);
    add_dataset(s.app, s.overrides, false);
    add_model(s.app, s.overrides, true);
    add_training(s.app, s.overrides, true);
    if (arms) add_arms(s.app, s.overrides);
    return std::ref(s);
  };
  standard("mlpinit", "PeerMLP training, weight transfer, GNN fine-tuning", MLPINIT_DISPATCH(cmd_mlpinit), false);
  {
    Sub& s = standard("bench", "Epochs-to-comparable speedup of MLPInit over random init",
                      MLPINIT_DISPATCH(cmd_bench), false);
    s.overrides.add<std::vector<std::uint64_t>>(s.app, "--seeds", "Seeds, comma separated", set(&RunConfig::seeds));
    s.overrides.add<double>(s.app, "--epsilon", "Tolerance on the target metric", set(&RunConfig::epsilon));
  }
  standard("linkpred", "Link prediction with both arms; AUC, AP, Hits@K", MLPINIT_DISPATCH(cmd_linkpred), true);
  {
    Sub& s = standard("landscape", "2D loss slices around trained weights", MLPINIT_DISPATCH(cmd_landscape), true);
    s.overrides.add<double>(s.app, "--half-range", "Grid half range",
                            [](RunConfig& c, const double& v) { c.grid.half_range = v; });
    s.overrides.add<std::size_t>(s.app, "--steps", "Grid points per axis (odd)",
                                 [](RunConfig& c, const std::size_t& v) { c.grid.steps = v; });
    s.overrides.add<double>(s.app, "--delta", "Low-loss threshold above the base loss", set(&RunConfig::low_loss_delta));
  }
  standard("trajectory", "PCA projection of PeerMLP and GNN training snapshots", MLPINIT_DISPATCH(cmd_trajectory), false);
  {
    Sub& s = standard("hist", "Weight-magnitude histograms of trained GNNs", MLPINIT_DISPATCH(cmd_hist), true);
    s.overrides.add<std::size_t>(s.app, "--bins", "Number of bins", set(&RunConfig::hist_bins));
    s.overrides.add<std::vector<double>>(s.app, "--range", "Histogram range lo,hi",
                                         [](RunConfig& c, const std::vector<double>& v) {
                                           if (v.size() != 2) throw ConfigError("--range needs lo,hi");
                                           c.hist_lo = v[0];
                                           c.hist_hi = v[1];
                                         });
    s.overrides.flag(s.app, "--include-bias", "Count bias values too", [](RunConfig& c) { c.hist_include_bias = true; });
  }
  {
    Sub& s = add_sub("sweep", "Hyperparameter grid; one curve per combination and arm", MLPINIT_DISPATCH(cmd_sweep));
    add_common(s.app, s.overrides);
    add_dataset(s.app, s.overrides, false);
    add_model(s.app, s.overrides, false);
    add_training(s.app, s.overrides, false);
    add_arms(s.app, s.overrides);
    s.overrides.add<std::vector<std::size_t>>(s.app, "--layers", "Layer counts", set(&RunConfig::sweep_layers));
    s.overrides.add<std::vector<std::size_t>>(s.app, "--hidden", "Hidden widths", set(&RunConfig::sweep_hidden));
    s.overrides.add<std::vector<double>>(s.app, "--lr", "Learning rates", set(&RunConfig::sweep_lr));
    s.overrides.add<std::vector<double>>(s.app, "--weight-decay", "Weight decays", set(&RunConfig::sweep_wd));
    s.overrides.add<std::vector<std::size_t>>(s.app, "--batch-size", "Batch sizes", set(&RunConfig::sweep_batch));
    s.overrides.add<std::vector<double>>(s.app, "--dropout", "Dropout rates", set(&RunConfig::sweep_dropout));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    err << "error: " << e.what() << "\n\n" << target->help();
    return 2;
  }

  Sub* chosen = nullptr;
  for (auto& s : subs) {
    if (s->app->parsed()) chosen = s.get();
  }
  const std::string command = chosen->app->get_name();
  try {
    RunConfig cfg;
    if (!chosen->config_path.empty()) {
      std::ifstream f(chosen->config_path);
      if (!f) throw ConfigError("field 'config': cannot read '" + chosen->config_path + "'");
      Json j;
      try {
        j = Json::parse(f);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("field 'config': invalid JSON in '" + chosen->config_path + "': " + e.what());
      }
      if (j.contains("command") && j["command"] != command) {
        throw ConfigError("field 'command': manifest was written by '" + j["command"].get<std::string>() +
                          "', not '" + command + "'");
      }
      cfg = run_config_from_json(j);
    }
    chosen->overrides.apply(cfg);
    validate(cfg);

    Context ctx{command, cfg, fs::path(cfg.out), out};
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec || !fs::is_directory(ctx.out_dir)) throw ConfigError("field 'out': cannot create '" + cfg.out + "'");
    Json manifest;
    manifest["command"] = command;
    manifest["version"] = kArtifactVersion;
    manifest["seed"] = cfg.seed;
    manifest["config"] = to_json(cfg);
    chosen->run(ctx);
    write_json(ctx.out_dir / "manifest.json", manifest);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mlpinit
