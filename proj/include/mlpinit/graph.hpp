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

#include <cstdint>
#include <vector>

#include "mlpinit/linalg.hpp"

namespace mlpinit {

using NodeId = std::uint32_t;

struct NodeSplits {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;

  bool operator==(const NodeSplits&) const = default;
};

// Attributed graph: features X[N×D], symmetric binary adjacency A, labels in
// [0, C) and disjoint train/val/test node sets. Immutable once validated.
struct Graph {
  Matrix<double> features;
  CsrMatrix<double> adjacency;
  std::vector<int> labels;
  int num_classes = 0;
  NodeSplits splits;

  std::size_t num_nodes() const { return features.rows(); }
  std::size_t feature_dim() const { return features.cols(); }
  /// Undirected edge count (self-loops counted once).
  std::size_t num_edges() const;

  /// Throws ConsistencyError/RangeError when an invariant is broken.
  void validate() const;

  bool operator==(const Graph&) const = default;
};

/// Builds a symmetric, deduplicated binary adjacency from undirected edges.
CsrMatrix<double> symmetric_adjacency(std::size_t n,
                                      const std::vector<std::pair<NodeId, NodeId>>& edges);

struct SyntheticConfig {
  std::size_t n = 2000;
  int c = 4;
  std::size_t d = 32;
  double p_in = 0.05;
  double p_out = 0.005;
  double class_sep = 1.5;
  double lambda = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Planted-partition graph with class-conditioned Gaussian features mixed
/// toward noise by cfg.lambda. Splits are left empty.
Graph generate_synthetic(const SyntheticConfig& cfg);

/// λ·X + (1−λ)·R where R is i.i.d. normal noise rescaled per column to X's
/// column mean and standard deviation.
Matrix<double> mix_features(const Matrix<double>& x_orig, double lambda, std::uint64_t seed);

struct SplitFractions {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
};

NodeSplits split_nodes(std::size_t n, SplitFractions fractions, std::uint64_t seed);

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  bool operator==(const Edge&) const = default;
};

struct EdgeSplit {
  std::vector<Edge> train_pos;
  // Fixed negatives for evaluating the training loss; training itself draws
  // fresh negatives every step.
  std::vector<Edge> train_neg;
  std::vector<Edge> val_pos;
  std::vector<Edge> val_neg;
  std::vector<Edge> test_pos;
  std::vector<Edge> test_neg;
  // Symmetrized train positives only; val/test edges never leak into it.
  CsrMatrix<double> message_adjacency;
};

struct EdgeSplitFractions {
  double train = 0.85;
  double val = 0.05;
  double test = 0.10;
};

EdgeSplit split_edges(const Graph& graph, EdgeSplitFractions fractions, std::size_t neg_per_pos,
                      std::uint64_t seed);

}  // namespace mlpinit
