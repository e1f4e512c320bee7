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

#include "mlpinit/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "mlpinit/errors.hpp"
#include "mlpinit/loss.hpp"
#include "mlpinit/optimizer.hpp"

namespace mlpinit {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("train.learning_rate must be a finite value > 0");
  }
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw ConfigError("train.weight_decay must be >= 0");
  }
  if (dropout && !(*dropout >= 0.0 && *dropout < 1.0)) {
    throw ConfigError("train.dropout must lie in [0, 1)");
  }
  if (eval_every < 1) throw ConfigError("train.eval_every must be >= 1");
  if (precision != 32 && precision != 64) throw ConfigError("train.precision must be 32 or 64");
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const EdgeSplit& edge_split(const LinkPrediction& task) {
  if (!task.split) throw ConfigError("link prediction task has no edge split");
  return *task.split;
}

template <typename T>
std::vector<double> concat_logits(const Matrix<T>& h, const std::vector<Edge>& pos,
                                  const std::vector<Edge>& neg) {
  auto scores = link_logits(h, pos);
  auto n = link_logits(h, neg);
  scores.insert(scores.end(), n.begin(), n.end());
  return scores;
}

std::vector<double> link_targets(std::size_t n_pos, std::size_t n_neg) {
  std::vector<double> t(n_pos + n_neg, 0.0);
  std::fill(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n_pos), 1.0);
  return t;
}

// Gradient of the decoder loss w.r.t. the embeddings.
template <typename T>
Matrix<T> link_embedding_grad(const Matrix<T>& h, const std::vector<Edge>& pos,
                              const std::vector<Edge>& neg, const std::vector<double>& grad) {
  Matrix<T> g(h.rows(), h.cols());
  auto scatter = [&](const Edge& e, double gs) {
    const T s = static_cast<T>(gs);
    auto hu = h.row(e.u);
    auto hv = h.row(e.v);
    auto gu = g.row(e.u);
    auto gv = g.row(e.v);
    for (std::size_t k = 0; k < h.cols(); ++k) {
      gu[k] += s * hv[k];
      gv[k] += s * hu[k];
    }
  };
  for (std::size_t i = 0; i < pos.size(); ++i) scatter(pos[i], grad[i]);
  for (std::size_t i = 0; i < neg.size(); ++i) scatter(neg[i], grad[pos.size() + i]);
  return g;
}

}  // namespace

std::vector<Edge> sample_negative_edges(const CsrMatrix<double>& adjacency, std::size_t count,
                                        Rng& rng) {
  const std::size_t n = adjacency.rows();
  if (count == 0) return {};
  if (n < 2 || adjacency.nnz() >= n * n - n) {
    throw SamplingError("no non-edges available for negative sampling");
  }
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::vector<Edge> out;
  out.reserve(count);
  while (out.size() < count) {
    NodeId u = pick(rng), v = pick(rng);
    if (u == v || adjacency.contains(u, v)) continue;
    out.push_back({std::min(u, v), std::max(u, v)});
  }
  return out;
}

template <typename T>
Evaluator<T>::Evaluator(const ModelConfig& config, const Graph& graph, Task task)
    : config_(config), graph_(&graph), task_(std::move(task)), features_(graph.features.cast<T>()) {
  config_.validate();
  if (config_.aggregation) {
    if (const auto* link = std::get_if<LinkPrediction>(&task_)) {
      prop_ = Propagation<T>::full(edge_split(*link).message_adjacency, config_);
    } else {
      prop_ = Propagation<T>::full(graph.adjacency, config_);
    }
  }
}

template <typename T>
Matrix<T> Evaluator<T>::outputs(const ParamSet<T>& params) const {
  return forward(config_, params, features_, prop_ ? &*prop_ : nullptr);
}

template <typename T>
double Evaluator<T>::loss(const ParamSet<T>& params) const {
  const Matrix<T> out = outputs(params);
  if (const auto* link = std::get_if<LinkPrediction>(&task_)) {
    const auto& s = edge_split(*link);
    return bce_with_logits(concat_logits(out, s.train_pos, s.train_neg),
                           link_targets(s.train_pos.size(), s.train_neg.size()))
        .loss;
  }
  return cross_entropy(out, graph_->labels, graph_->splits.train).loss;
}

template <typename T>
EvalResult Evaluator<T>::evaluate(const ParamSet<T>& params) const {
  const Matrix<T> out = outputs(params);
  EvalResult r;
  if (const auto* link = std::get_if<LinkPrediction>(&task_)) {
    const auto& s = edge_split(*link);
    r.loss = bce_with_logits(concat_logits(out, s.train_pos, s.train_neg),
                             link_targets(s.train_pos.size(), s.train_neg.size()))
                 .loss;
    if (!s.val_pos.empty() && !s.val_neg.empty()) {
      r.val_metric = auc_score(link_logits(out, s.val_pos), link_logits(out, s.val_neg));
    }
    if (!s.test_pos.empty() && !s.test_neg.empty()) {
      r.test_metric = auc_score(link_logits(out, s.test_pos), link_logits(out, s.test_neg));
    }
    return r;
  }
  const auto& sp = graph_->splits;
  r.loss = cross_entropy(out, graph_->labels, sp.train).loss;
  if (!sp.val.empty()) r.val_metric = accuracy(out, std::span<const int>(graph_->labels), sp.val);
  if (!sp.test.empty()) r.test_metric = accuracy(out, std::span<const int>(graph_->labels), sp.test);
  return r;
}

template <typename T>
double Evaluator<T>::node_accuracy(const ParamSet<T>& params, std::span<const NodeId> rows) const {
  if (!std::holds_alternative<NodeClassification>(task_)) {
    throw ConfigError("node_accuracy needs a node classification task");
  }
  return accuracy(outputs(params), std::span<const int>(graph_->labels), rows);
}

template <typename T>
RankMetrics Evaluator<T>::link_metrics(const ParamSet<T>& params, bool test_split,
                                       HitsMode mode) const {
  const auto* link = std::get_if<LinkPrediction>(&task_);
  if (link == nullptr) throw ConfigError("link_metrics needs a link prediction task");
  const auto& s = edge_split(*link);
  const Matrix<T> out = outputs(params);
  const auto& pos = test_split ? s.test_pos : s.val_pos;
  const auto& neg = test_split ? s.test_neg : s.val_neg;
  return rank_metrics(link_logits(out, pos), link_logits(out, neg), kDefaultHitsK, mode);
}

template <typename T>
TrainResult<T> train_model(const ModelConfig& config, const Graph& graph, const Task& task,
                           const TrainConfig& tcfg, const ParamSet<T>& init,
                           const SamplerStrategy& sampler, const TrainHooks<T>& hooks) {
  tcfg.validate();
  config.validate();
  check_params(config, init);

  ModelConfig run_config = config;
  if (tcfg.dropout) run_config.dropout = *tcfg.dropout;

  const auto start = Clock::now();
  Evaluator<T> evaluator(config, graph, task);
  Rng dropout_rng = make_rng(tcfg.seed, "dropout");
  Rng sampler_rng = make_rng(tcfg.seed, "sampler");
  Rng order_rng = make_rng(tcfg.seed, "batches");
  Rng negative_rng = make_rng(tcfg.seed, "negatives");

  ParamSet<T> params = init;
  OptimizerState<T> opt = OptimizerState<T>::zeros_like(init);
  TrainResult<T> result;

  auto make_record = [&](std::size_t epoch) {
    EvalResult e;
    try {
      e = evaluator.evaluate(params);
    } catch (const NumericError& err) {
      throw DivergenceError(std::string("evaluation diverged: ") + err.what(), epoch);
    }
    if (!std::isfinite(e.loss)) throw DivergenceError("training loss is not finite", epoch);
    return EpochRecord{epoch, e.loss, e.val_metric, e.test_metric, elapsed_ms(start)};
  };

  result.initial = make_record(0);
  result.best_params = init;
  if (hooks.on_epoch) hooks.on_epoch(0, params);

  const bool is_link = std::holds_alternative<LinkPrediction>(task);
  const bool sampled = !std::holds_alternative<FullGraph>(sampler);
  if (is_link && sampled && config.aggregation) {
    throw ConfigError("link prediction trains on the full message graph; use the full-graph sampler");
  }

  std::optional<Propagation<T>> full_prop;
  const Matrix<T> features = graph.features.cast<T>();
  if (config.aggregation && (is_link || !sampled)) {
    const auto& adj = is_link ? edge_split(std::get<LinkPrediction>(task)).message_adjacency
                              : graph.adjacency;
    full_prop = Propagation<T>::full(adj, config);
  }

  // Units shuffled into batches: train nodes or train positive edges.
  std::size_t num_units = 0;
  if (is_link) {
    num_units = edge_split(std::get<LinkPrediction>(task)).train_pos.size();
  } else {
    num_units = graph.splits.train.size();
  }
  if (num_units == 0 && tcfg.epochs > 0) throw ConfigError("no training examples");
  const std::size_t batch =
      tcfg.batch_size == 0 ? num_units : std::min(tcfg.batch_size, num_units);
  std::vector<std::size_t> order(num_units);
  for (std::size_t i = 0; i < num_units; ++i) order[i] = i;

  auto node_step = [&](std::span<const std::size_t> units) {
    std::vector<NodeId> nodes;
    nodes.reserve(units.size());
    for (auto u : units) nodes.push_back(graph.splits.train[u]);
    ForwardCache<T> cache;
    ParamSet<T> grads;
    double loss = 0.0;
    if (!config.aggregation) {
      Matrix<T> xb(nodes.size(), features.cols());
      std::vector<int> labels(nodes.size());
      std::vector<NodeId> rows(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto src = features.row(nodes[i]);
        std::copy(src.begin(), src.end(), xb.row(i).begin());
        labels[i] = graph.labels[nodes[i]];
        rows[i] = static_cast<NodeId>(i);
      }
      Matrix<T> out = forward(run_config, params, xb, static_cast<const Propagation<T>*>(nullptr), &dropout_rng, &cache);
      auto lg = cross_entropy(out, labels, rows);
      loss = lg.loss;
      grads = backward(run_config, params, static_cast<const Propagation<T>*>(nullptr), cache, lg.grad);
    } else if (!sampled) {
      Matrix<T> out = forward(run_config, params, features, &*full_prop, &dropout_rng, &cache);
      auto lg = cross_entropy(out, std::span<const int>(graph.labels), nodes);
      loss = lg.loss;
      grads = backward(run_config, params, &*full_prop, cache, lg.grad);
    } else {
      SubgraphBatch sb = sample_subgraph(graph, nodes, sampler, config.depth(), sampler_rng);
      auto prop = Propagation<T>::from_blocks(sb.blocks, config);
      std::vector<int> labels(sb.nodes.size());
      for (std::size_t k = 0; k < sb.nodes.size(); ++k) labels[k] = graph.labels[sb.nodes[k]];
      Matrix<T> out = forward(run_config, params, sb.features.cast<T>(), &prop, &dropout_rng, &cache);
      auto lg = cross_entropy(out, labels, sb.targets);
      loss = lg.loss;
      grads = backward(run_config, params, &prop, cache, lg.grad);
    }
    return std::make_pair(loss, std::move(grads));
  };

  auto link_step = [&](std::span<const std::size_t> units) {
    const auto& s = edge_split(std::get<LinkPrediction>(task));
    std::vector<Edge> pos;
    pos.reserve(units.size());
    for (auto u : units) pos.push_back(s.train_pos[u]);
    std::vector<Edge> neg = sample_negative_edges(s.message_adjacency, pos.size(), negative_rng);
    ForwardCache<T> cache;
    const Propagation<T>* prop = full_prop ? &*full_prop : nullptr;
    Matrix<T> h = forward(run_config, params, features, prop, &dropout_rng, &cache);
    auto bce = bce_with_logits(concat_logits(h, pos, neg), link_targets(pos.size(), neg.size()));
    Matrix<T> gh = link_embedding_grad(h, pos, neg, bce.grad);
    return std::make_pair(bce.loss, backward(run_config, params, prop, cache, gh));
  };

  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t epoch = 1; epoch <= tcfg.epochs; ++epoch) {
    if (batch < num_units) std::shuffle(order.begin(), order.end(), order_rng);
    for (std::size_t b = 0; b < num_units; b += batch) {
      std::span<const std::size_t> units(order.data() + b, std::min(batch, num_units - b));
      std::pair<double, ParamSet<T>> step;
      try {
        step = is_link ? link_step(units) : node_step(units);
      } catch (const NumericError& err) {
        throw DivergenceError(std::string("training diverged: ") + err.what(), epoch);
      }
      if (!std::isfinite(step.first)) throw DivergenceError("training loss is NaN", epoch);
      adam_step(params, step.second, opt, tcfg.learning_rate, tcfg.weight_decay);
    }
    if (epoch % tcfg.eval_every == 0 || epoch == tcfg.epochs) {
      EpochRecord rec = make_record(epoch);
      if (rec.val_metric > best_val) {
        best_val = rec.val_metric;
        result.best_params = params;
        result.best_epoch = epoch;
      }
      result.history.push_back(rec);
    }
    if (hooks.on_epoch) hooks.on_epoch(epoch, params);
  }
  result.final_params = std::move(params);
  result.wall_ms = elapsed_ms(start);
  return result;
}

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_row(std::ostream& out, const EpochRecord& r) {
  out << r.epoch << ',' << fmt6(r.train_loss) << ',' << fmt6(r.val_metric) << ','
      << fmt6(r.test_metric) << ',' << fmt6(r.wall_ms) << '\n';
}

}  // namespace

void write_history(std::ostream& out, const std::vector<EpochRecord>& history,
                   const EpochRecord* initial) {
  out << "epoch,train_loss,val_metric,test_metric,wall_ms\n";
  if (initial != nullptr) write_row(out, *initial);
  for (const auto& r : history) write_row(out, r);
}

std::vector<EpochRecord> read_history(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "epoch,train_loss,val_metric,test_metric,wall_ms") {
    throw ParseError("history table: missing header", 1);
  }
  std::vector<EpochRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    EpochRecord r;
    char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    if (!(ss >> r.epoch >> c1 >> r.train_loss >> c2 >> r.val_metric >> c3 >> r.test_metric >> c4 >>
          r.wall_ms) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',') {
      throw ParseError("history table: malformed row", line_no);
    }
    rows.push_back(r);
  }
  return rows;
}

template class Evaluator<float>;
template class Evaluator<double>;
template TrainResult<float> train_model(const ModelConfig&, const Graph&, const Task&,
                                        const TrainConfig&, const ParamSet<float>&,
                                        const SamplerStrategy&, const TrainHooks<float>&);
template TrainResult<double> train_model(const ModelConfig&, const Graph&, const Task&,
                                         const TrainConfig&, const ParamSet<double>&,
                                         const SamplerStrategy&, const TrainHooks<double>&);

}  // namespace mlpinit
