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
#include <variant>
#include <vector>

#include "mlpinit/graph.hpp"
#include "mlpinit/rng.hpp"

namespace mlpinit {

// Per-layer uniform neighbor sampling without replacement. fanouts[l] caps
// the neighbors drawn for each node whose layer-l output is needed.
struct NeighborSampling {
  std::vector<std::size_t> fanouts;
};

// Induced subgraph on the batch plus uniformly drawn extra nodes, `size`
// nodes in total.
struct RandomNodeSampling {
  std::size_t size = 0;
};

struct FullGraph {};

using SamplerStrategy = std::variant<FullGraph, NeighborSampling, RandomNodeSampling>;

// A mini-batch subgraph in local indices. Local node k is global node
// nodes[k]; targets are the local ids of the batch nodes (in batch order).
// blocks[l] is the square local adjacency consumed by model layer l; rows of
// nodes whose layer-l output is not needed are empty.
struct SubgraphBatch {
  std::vector<NodeId> nodes;
  std::vector<NodeId> targets;
  std::vector<CsrMatrix<double>> blocks;
  Matrix<double> features;
};

/// `num_layers` blocks are produced; for NeighborSampling it must equal
/// fanouts.size().
SubgraphBatch sample_subgraph(const Graph& graph, const std::vector<NodeId>& batch_nodes,
                              const SamplerStrategy& strategy, std::size_t num_layers, Rng& rng);

}  // namespace mlpinit
