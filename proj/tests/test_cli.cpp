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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "mlpinit/cli.hpp"
#include "mlpinit/errors.hpp"
#include "mlpinit/param_io.hpp"

using namespace mlpinit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_command(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// Curve text with the wall_ms column removed.
std::string strip_wall(const std::string& curve) {
  std::istringstream in(curve);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

struct Workspace {
  fs::path root;
  Workspace() {
    root = fs::temp_directory_path() / ("mlpinit_cli_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }
  std::string operator/(const std::string& s) const { return (root / s).string(); }
};

const std::vector<std::string> kSmall = {"--n", "150", "--classes", "3", "--d", "8", "--hidden", "16"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("synth writes four dataset files and a manifest") {
  Workspace ws;
  auto r = run({"synth", "--n", "200", "--classes", "4", "--p-in", "0.05", "--p-out", "0.005", "--lambda", "1.0",
                "--seed", "1", "--out", ws / "data"});
  REQUIRE(r.status == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(ws.root / "data")) files += e.is_regular_file() ? 1 : 0;
  CHECK(files == 5);
  for (const char* f : {"edges.txt", "features.bin", "labels.txt", "splits.json", "manifest.json"})
    CHECK(fs::exists(ws.root / "data" / f));
  auto m = Json::parse(slurp(ws.root / "data" / "manifest.json"));
  CHECK(m["command"] == "synth");
  CHECK(m["version"] == kArtifactVersion);
  CHECK(m["seed"] == 1);
  CHECK(m["config"]["dataset"]["synthetic"]["n"] == 200);
}

TEST_CASE("unknown flags print usage and fail") {
  auto r = run({"train", "--no-such-flag"});
  CHECK(r.status != 0);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run({"frobnicate"}).status != 0);
  CHECK(run({}).status != 0);
}

TEST_CASE("--help documents flag precedence") {
  auto r = run({"bench", "--help"});
  CHECK(r.status == 0);
  CHECK(r.out.find("Precedence") != std::string::npos);
}

TEST_CASE("config validation failures name the field") {
  Workspace ws;
  std::ofstream(ws.root / "bad.json") << R"({"train": {"learning_rate": "fast"}})";
  auto r = run({"train", "--config", ws / "bad.json", "--out", ws / "x"});
  CHECK(r.status == 2);
  CHECK(r.err.find("train.learning_rate") != std::string::npos);
  std::ofstream(ws.root / "unknown.json") << R"({"model": {"widht": 3}})";
  r = run({"train", "--config", ws / "unknown.json", "--out", ws / "x"});
  CHECK(r.status == 2);
  CHECK(r.err.find("model.widht") != std::string::npos);
  r = run({"train", "--data", ws / "missing", "--out", ws / "x"});
  CHECK(r.status == 2);
  CHECK(r.err.find("dataset.path") != std::string::npos);
  r = run({"bench", "--epsilon", "-1", "--out", ws / "x"});
  CHECK(r.status == 2);
  CHECK(r.err.find("benchmark.epsilon") != std::string::npos);
}

TEST_CASE("run config JSON round-trips and manifests are accepted as configs") {
  RunConfig c;
  c.task = "link";
  c.model.kind = LayerKind::kGcn;
  c.model.aggregator = {AggregatorType::kSoftmax, 2.5};
  c.train.epochs = 7;
  c.train.dropout = 0.25;
  c.sampler = NeighborSampling{{5, 3}};
  c.seeds = {4, 9};
  c.hits_mode = HitsMode::kPerPositive;
  c.arms = {"mlpinit"};
  c.sweep_lr = {0.1, 0.01};
  const Json j = to_json(c);
  CHECK(to_json(run_config_from_json(j)).dump() == j.dump());
  Json manifest = {{"command", "train"}, {"version", kArtifactVersion}, {"seed", 1}, {"config", j}};
  CHECK(to_json(run_config_from_json(manifest)).dump() == j.dump());
  RunConfig with_data;
  with_data.data_dir = "/some/where";
  CHECK(*run_config_from_json(to_json(with_data)).data_dir == "/some/where");
}

TEST_CASE("flags override config fields") {
  Workspace ws;
  RunConfig c;
  c.train.epochs = 3;
  c.mlp_train.epochs = 2;
  c.synthetic.n = 120;
  c.synthetic.d = 4;
  c.model.hidden = 8;
  std::ofstream(ws.root / "c.json") << to_json(c).dump();
  auto r = run({"train", "--config", ws / "c.json", "--epochs", "2", "--out", ws / "t"});
  REQUIRE(r.status == 0);
  auto m = Json::parse(slurp(ws.root / "t" / "manifest.json"));
  CHECK(m["config"]["train"]["epochs"] == 2);
  CHECK(m["config"]["model"]["hidden"] == 8);
  // Curve: header + epoch 0 + two epochs.
  std::istringstream curve(slurp(ws.root / "t" / "gnn_1.curve"));
  std::size_t lines = 0;
  for (std::string l; std::getline(curve, l);) ++lines;
  CHECK(lines == 4);
}

TEST_CASE("train writes curves, params and metrics for either arm") {
  Workspace ws;
  for (const std::string arm : {"gnn", "peermlp"}) {
    auto r = run(with({"train"}, with(kSmall, {"--epochs", "3", "--mlp-epochs", "3", "--arm", arm, "--out", ws / arm})));
    REQUIRE(r.status == 0);
    CHECK(fs::exists(ws.root / arm / (arm + "_1.curve")));
    CHECK(fs::exists(ws.root / arm / "best_params.bin"));
    auto metrics = Json::parse(slurp(ws.root / arm / "metrics.json"));
    CHECK(metrics["test_metric"].is_number());
  }
  std::vector<std::string> train_args = {"train"};
  CHECK(run(with(train_args, with(kSmall, {"--precision", "64", "--epochs", "2", "--out", ws / "p64"}))).status == 0);
}

TEST_CASE("mlpinit with zero GNN epochs deploys the PeerMLP weights byte for byte") {
  Workspace ws;
  std::vector<std::string> args = {"mlpinit"};
  auto r = run(with(args, with(kSmall, {"--mlp-epochs", "5", "--gnn-epochs", "0", "--out", ws / "mi"})));
  REQUIRE(r.status == 0);
  CHECK(slurp(ws.root / "mi" / "best_params.bin") == slurp(ws.root / "mi" / "peermlp_best.bin"));
  CHECK(fs::exists(ws.root / "mi" / "peermlp_1.curve"));
  CHECK(fs::exists(ws.root / "mi" / "mlpinit_1.curve"));
}

TEST_CASE("bench report speedup recomputes from the per-seed rows") {
  Workspace ws;
  std::vector<std::string> args = {"bench"};
  auto r = run(with(args, with(kSmall, {"--seeds", "1,2,3", "--epochs", "8", "--mlp-epochs", "8", "--out", ws / "b"})));
  REQUIRE(r.status == 0);
  auto rep = Json::parse(slurp(ws.root / "b" / "report.json"));
  double sr = 0, sm = 0;
  int both = 0;
  for (const auto& s : rep["per_seed"]) {
    if (s["epochs_random"].is_number() && s["epochs_mlpinit"].is_number()) {
      sr += s["epochs_random"].get<double>();
      sm += s["epochs_mlpinit"].get<double>();
      ++both;
    }
  }
  if (both > 0 && sm > 0) {
    CHECK(rep["speedup"].get<double>() == doctest::Approx(sr / sm).epsilon(1e-12));
  } else {
    CHECK(rep["speedup"] == "---");
  }
  for (int s = 1; s <= 3; ++s)
    for (const char* arm : {"random", "mlpinit", "peermlp"})
      CHECK(fs::exists(ws.root / "b" / (std::string(arm) + "_" + std::to_string(s) + ".curve")));
}

TEST_CASE("sweep over layers and widths emits one curve per combination") {
  Workspace ws;
  std::vector<std::string> args = {"sweep", "--n", "120", "--d", "4", "--layers", "2,3,4", "--hidden", "32,64",
                                   "--epochs", "1", "--mlp-epochs", "1", "--out", ws / "s"};
  REQUIRE(run(args).status == 0);
  std::size_t curves = 0;
  for (const auto& e : fs::directory_iterator(ws.root / "s")) curves += e.path().extension() == ".curve" ? 1 : 0;
  CHECK(curves == 6);
}

TEST_CASE("linkpred, landscape, trajectory and hist produce their artifacts") {
  Workspace ws;
  auto base = with(kSmall, {"--epochs", "3", "--mlp-epochs", "3"});
  REQUIRE(run(with({"linkpred"}, with(base, {"--hits-mode", "per-positive", "--out", ws / "lp"}))).status == 0);
  auto lp = Json::parse(slurp(ws.root / "lp" / "linkpred.json"));
  CHECK(lp["hits_mode"] == "per-positive");
  CHECK(lp["mlpinit"]["test"]["auc"].is_number());
  REQUIRE(run(with({"landscape"}, with(base, {"--steps", "3", "--out", ws / "ls"}))).status == 0);
  CHECK(fs::exists(ws.root / "ls" / "landscape_random.csv"));
  auto ls = Json::parse(slurp(ws.root / "ls" / "landscape.json"));
  CHECK(ls["direction_seed"] == 1);
  CHECK(ls["direction_shapes"].size() == 6);
  REQUIRE(run(with({"trajectory"}, with(base, {"--out", ws / "tr"}))).status == 0);
  const std::string traj = slurp(ws.root / "tr" / "trajectory.csv");
  CHECK(traj.find(",mlp,") != std::string::npos);
  CHECK(traj.find(",gnn,") != std::string::npos);
  REQUIRE(run(with({"hist"}, with(base, {"--arms", "mlpinit", "--out", ws / "h"}))).status == 0);
  CHECK(fs::exists(ws.root / "h" / "hist_mlpinit.csv"));
  CHECK_FALSE(fs::exists(ws.root / "h" / "hist_random.csv"));
}

TEST_CASE("rerunning from a manifest reproduces metric tables") {
  Workspace ws;
  auto first = with({"mlpinit"}, with(kSmall, {"--epochs", "4", "--mlp-epochs", "4", "--dropout", "0.3",
                                               "--batch-size", "32", "--out", ws / "a"}));
  REQUIRE(run(first).status == 0);
  REQUIRE(run({"mlpinit", "--config", ws / "a/manifest.json", "--out", ws / "b"}).status == 0);
  CHECK(strip_wall(slurp(ws.root / "a" / "mlpinit_1.curve")) == strip_wall(slurp(ws.root / "b" / "mlpinit_1.curve")));
  CHECK(slurp(ws.root / "a" / "metrics.json") == slurp(ws.root / "b" / "metrics.json"));
  CHECK(slurp(ws.root / "a" / "best_params.bin") == slurp(ws.root / "b" / "best_params.bin"));
  // A manifest from a different subcommand is refused.
  CHECK(run({"bench", "--config", ws / "a/manifest.json", "--out", ws / "c"}).status == 2);
}
