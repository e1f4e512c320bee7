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

#include "mlpinit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "mlpinit/errors.hpp"
#include "mlpinit/rng.hpp"

namespace mlpinit {

std::size_t Graph::num_edges() const {
  std::size_t self_loops = 0;
  for (std::size_t r = 0; r < adjacency.rows(); ++r) {
    if (adjacency.contains(r, r)) ++self_loops;
  }
  return (adjacency.nnz() - self_loops) / 2 + self_loops;
}

void Graph::validate() const {
  const std::size_t n = num_nodes();
  if (adjacency.rows() != n || adjacency.cols() != n) {
    throw ConsistencyError("adjacency is " + std::to_string(adjacency.rows()) + "x" +
                           std::to_string(adjacency.cols()) + " but graph has " +
                           std::to_string(n) + " nodes");
  }
  if (labels.size() != n) {
    throw ConsistencyError("labels length " + std::to_string(labels.size()) + " != " +
                           std::to_string(n) + " nodes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw RangeError("label " + std::to_string(labels[i]) + " of node " + std::to_string(i) +
                       " outside [0, " + std::to_string(num_classes) + ")");
    }
  }
  if (!adjacency.is_symmetric()) throw ConsistencyError("adjacency is not symmetric");
  std::vector<char> owner(n, 0);
  auto claim = [&](const std::vector<NodeId>& ids, char tag, const char* name) {
    for (NodeId id : ids) {
      if (id >= n) {
        throw RangeError(std::string(name) + " split index " + std::to_string(id) +
                         " >= " + std::to_string(n));
      }
      if (owner[id] != 0) {
        throw ConsistencyError("node " + std::to_string(id) + " appears in more than one split");
      }
      owner[id] = tag;
    }
  };
  claim(splits.train, 1, "train");
  claim(splits.val, 2, "val");
  claim(splits.test, 3, "test");
}

CsrMatrix<double> symmetric_adjacency(std::size_t n,
                                      const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> entries;
  entries.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      throw RangeError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") references a node >= " + std::to_string(n));
    }
    entries.emplace_back(u, v, 1.0);
    if (u != v) entries.emplace_back(v, u, 1.0);
  }
  return CsrMatrix<double>::from_triplets(n, n, std::move(entries));
}

void SyntheticConfig::validate() const {
  if (c < 1) throw ConfigError("synthetic: classes must be >= 1");
  if (n < static_cast<std::size_t>(c)) {
    throw ConfigError("synthetic: n (" + std::to_string(n) + ") must be >= classes (" +
                      std::to_string(c) + ")");
  }
  if (d < 1) throw ConfigError("synthetic: feature dim must be >= 1");
  if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0)) {
    throw ConfigError("synthetic: require 0 <= p_out <= p_in <= 1");
  }
  if (!(0.0 <= lambda && lambda <= 1.0)) throw ConfigError("synthetic: lambda must be in [0, 1]");
  if (!(class_sep >= 0.0)) throw ConfigError("synthetic: class_sep must be >= 0");
}

namespace {

// Calls emit(k) for each index k in [0, count) kept independently with
// probability p, skipping ahead geometrically.
template <typename Emit>
void bernoulli_indices(std::uint64_t count, double p, Rng& rng, Emit&& emit) {
  if (count == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::uint64_t k = 0; k < count; ++k) emit(k);
    return;
  }
  std::geometric_distribution<std::uint64_t> skip(p);
  std::uint64_t k = skip(rng);
  while (k < count) {
    emit(k);
    k += skip(rng) + 1;
  }
}

}  // namespace

Graph generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  Rng rng = make_rng(cfg.seed, "synthetic");
  const std::size_t n = cfg.n;
  const int c = cfg.c;

  // Balanced class sizes in a uniformly random arrangement.
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % static_cast<std::size_t>(c));
  std::shuffle(labels.begin(), labels.end(), rng);

  std::vector<std::vector<NodeId>> groups(static_cast<std::size_t>(c));
  for (std::size_t i = 0; i < n; ++i) groups[labels[i]].push_back(static_cast<NodeId>(i));

  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int a = 0; a < c; ++a) {
    const auto& ga = groups[a];
    // Upper triangle of the within-class block, walked row by row.
    std::uint64_t m = ga.size();
    std::uint64_t row = 0;
    std::uint64_t row_start = 0;
    bernoulli_indices(m * (m - (m > 0 ? 1 : 0)) / 2, cfg.p_in, rng, [&](std::uint64_t k) {
      while (k >= row_start + (m - 1 - row)) {
        row_start += m - 1 - row;
        ++row;
      }
      std::uint64_t col = row + 1 + (k - row_start);
      edges.emplace_back(ga[row], ga[col]);
    });
    for (int b = a + 1; b < c; ++b) {
      const auto& gb = groups[b];
      bernoulli_indices(ga.size() * gb.size(), cfg.p_out, rng, [&](std::uint64_t k) {
        edges.emplace_back(ga[k / gb.size()], gb[k % gb.size()]);
      });
    }
  }

  // Class means with norm class_sep in random directions, unit-variance noise.
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix<double> means(static_cast<std::size_t>(c), cfg.d);
  for (std::size_t k = 0; k < static_cast<std::size_t>(c); ++k) {
    double norm2 = 0.0;
    for (auto& v : means.row(k)) {
      v = normal(rng);
      norm2 += v * v;
    }
    double scale = norm2 > 0.0 ? cfg.class_sep / std::sqrt(norm2) : 0.0;
    for (auto& v : means.row(k)) v *= scale;
  }
  Matrix<double> base(n, cfg.d);
  for (std::size_t i = 0; i < n; ++i) {
    auto mu = means.row(static_cast<std::size_t>(labels[i]));
    auto row = base.row(i);
    for (std::size_t j = 0; j < cfg.d; ++j) row[j] = mu[j] + normal(rng);
  }

  Graph g;
  g.features = mix_features(base, cfg.lambda, substream_seed(cfg.seed, "mix"));
  g.adjacency = symmetric_adjacency(n, edges);
  g.labels = std::move(labels);
  g.num_classes = c;
  return g;
}

Matrix<double> mix_features(const Matrix<double>& x_orig, double lambda, std::uint64_t seed) {
  if (!(0.0 <= lambda && lambda <= 1.0)) throw ConfigError("mix_features: lambda must be in [0, 1]");
  const std::size_t n = x_orig.rows();
  const std::size_t d = x_orig.cols();
  Rng rng = make_rng(seed, "mix_features");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix<double> noise(n, d);
  for (auto& v : noise.values()) v = normal(rng);

  for (std::size_t j = 0; j < d && n > 0; ++j) {
    double mean_x = 0.0, mean_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mean_x += x_orig(i, j);
      mean_r += noise(i, j);
    }
    mean_x /= static_cast<double>(n);
    mean_r /= static_cast<double>(n);
    double var_x = 0.0, var_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      var_x += (x_orig(i, j) - mean_x) * (x_orig(i, j) - mean_x);
      var_r += (noise(i, j) - mean_r) * (noise(i, j) - mean_r);
    }
    double scale = var_r > 0.0 ? std::sqrt(var_x / var_r) : 0.0;
    for (std::size_t i = 0; i < n; ++i) noise(i, j) = (noise(i, j) - mean_r) * scale + mean_x;
  }

  Matrix<double> out(n, d);
  auto xo = x_orig.values();
  auto xr = noise.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = lambda * xo[k] + (1.0 - lambda) * xr[k];
  return out;
}

NodeSplits split_nodes(std::size_t n, SplitFractions f, std::uint64_t seed) {
  if (f.train < 0.0 || f.val < 0.0 || f.test < 0.0) {
    throw ConfigError("split fractions must be non-negative");
  }
  if (f.train + f.val + f.test > 1.0 + 1e-9) throw ConfigError("split fractions sum above 1");
  auto size_of = [&](double frac, const char* name) {
    auto k = static_cast<std::size_t>(std::floor(frac * static_cast<double>(n) + 1e-9));
    if (frac > 0.0 && k == 0) {
      throw ConfigError(std::string(name) + " split would be empty on a graph of " +
                        std::to_string(n) + " nodes");
    }
    return k;
  };
  std::size_t n_train = size_of(f.train, "train");
  std::size_t n_val = size_of(f.val, "val");
  std::size_t n_test = size_of(f.test, "test");
  if (n_train + n_val + n_test > n) throw ConfigError("split sizes exceed the node count");
  if (f.train + f.val + f.test >= 1.0 - 1e-9) n_train = n - n_val - n_test;

  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  Rng rng = make_rng(seed, "split_nodes");
  std::shuffle(perm.begin(), perm.end(), rng);

  NodeSplits s;
  auto take = [&](std::size_t begin, std::size_t count) {
    std::vector<NodeId> ids(perm.begin() + begin, perm.begin() + begin + count);
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  s.train = take(0, n_train);
  s.val = take(n_train, n_val);
  s.test = take(n_train + n_val, n_test);
  return s;
}

EdgeSplit split_edges(const Graph& graph, EdgeSplitFractions f, std::size_t neg_per_pos,
                      std::uint64_t seed) {
  const auto& adj = graph.adjacency;
  const std::size_t n = graph.num_nodes();
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (auto v : adj.row_cols(u)) {
      if (u < v) edges.push_back({static_cast<NodeId>(u), v});
    }
  }
  if (edges.size() < 10) {
    throw SamplingError("split_edges needs at least 10 edges, graph has " +
                        std::to_string(edges.size()));
  }
  if (f.train < 0.0 || f.val < 0.0 || f.test < 0.0 || f.train + f.val + f.test > 1.0 + 1e-9) {
    throw ConfigError("edge split fractions must be non-negative and sum to at most 1");
  }
  Rng rng = make_rng(seed, "split_edges");
  std::shuffle(edges.begin(), edges.end(), rng);

  const double m = static_cast<double>(edges.size());
  auto n_val = static_cast<std::size_t>(std::floor(f.val * m + 1e-9));
  auto n_test = static_cast<std::size_t>(std::floor(f.test * m + 1e-9));
  // Fractions summing to 1 hand the rounding remainder to train.
  auto n_train = f.train + f.val + f.test >= 1.0 - 1e-9
                     ? edges.size() - n_val - n_test
                     : std::min(edges.size() - n_val - n_test,
                                static_cast<std::size_t>(std::floor(f.train * m + 1e-9)));

  EdgeSplit split;
  split.val_pos.assign(edges.begin(), edges.begin() + n_val);
  split.test_pos.assign(edges.begin() + n_val, edges.begin() + n_val + n_test);
  split.train_pos.assign(edges.begin() + n_val + n_test, edges.begin() + n_val + n_test + n_train);

  std::vector<std::pair<NodeId, NodeId>> msg;
  msg.reserve(split.train_pos.size());
  for (const auto& e : split.train_pos) msg.emplace_back(e.u, e.v);
  split.message_adjacency = symmetric_adjacency(n, msg);

  // Negatives: distinct unordered non-edges, u != v, drawn without replacement.
  const std::size_t n_neg_val = neg_per_pos * split.val_pos.size();
  const std::size_t n_neg_test = neg_per_pos * split.test_pos.size();
  const std::size_t n_neg_train = split.train_pos.size();
  const std::size_t wanted = n_neg_val + n_neg_test + n_neg_train;
  const double all_pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  std::size_t self_loops = 0;
  for (std::size_t u = 0; u < n; ++u) self_loops += adj.contains(u, u) ? 1 : 0;
  const double non_edges = all_pairs - static_cast<double>(graph.num_edges() - self_loops);
  if (static_cast<double>(wanted) > non_edges) {
    throw SamplingError("requested " + std::to_string(wanted) + " negatives but only " +
                        std::to_string(static_cast<std::size_t>(non_edges)) + " non-edges exist");
  }
  std::vector<Edge> negatives;
  negatives.reserve(wanted);
  if (static_cast<double>(wanted) > 0.5 * non_edges) {
    // Dense regime: enumerate then shuffle.
    std::vector<Edge> pool;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        if (!adj.contains(u, v)) pool.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
      }
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    negatives.assign(pool.begin(), pool.begin() + wanted);
  } else {
    std::set<std::pair<NodeId, NodeId>> seen;
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    while (negatives.size() < wanted) {
      NodeId u = pick(rng), v = pick(rng);
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (adj.contains(u, v) || !seen.insert({u, v}).second) continue;
      negatives.push_back({u, v});
    }
  }
  split.val_neg.assign(negatives.begin(), negatives.begin() + n_neg_val);
  split.test_neg.assign(negatives.begin() + n_neg_val, negatives.begin() + n_neg_val + n_neg_test);
  split.train_neg.assign(negatives.begin() + n_neg_val + n_neg_test, negatives.end());
  return split;
}

}  // namespace mlpinit
