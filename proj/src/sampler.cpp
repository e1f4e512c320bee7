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

#include "mlpinit/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <unordered_map>

#include "mlpinit/errors.hpp"

namespace mlpinit {

namespace {

class LocalIndex {
 public:
  NodeId add(NodeId global) {
    auto [it, inserted] = local_.try_emplace(global, static_cast<NodeId>(nodes_.size()));
    if (inserted) nodes_.push_back(global);
    return it->second;
  }
  NodeId at(NodeId global) const { return local_.at(global); }
  bool has(NodeId global) const { return local_.count(global) != 0; }
  std::size_t size() const { return nodes_.size(); }
  std::vector<NodeId>& nodes() { return nodes_; }

 private:
  std::unordered_map<NodeId, NodeId> local_;
  std::vector<NodeId> nodes_;
};

Matrix<double> gather_rows(const Matrix<double>& x, const std::vector<NodeId>& ids) {
  Matrix<double> out(ids.size(), x.cols());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    std::copy(x.row(ids[k]).begin(), x.row(ids[k]).end(), out.row(k).begin());
  }
  return out;
}

void check_batch(const Graph& graph, const std::vector<NodeId>& batch) {
  for (NodeId v : batch) {
    if (v >= graph.num_nodes()) {
      throw RangeError("batch node " + std::to_string(v) + " >= " +
                       std::to_string(graph.num_nodes()));
    }
  }
}

using Triplets = std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>;

}  // namespace

SubgraphBatch sample_subgraph(const Graph& graph, const std::vector<NodeId>& batch_nodes,
                              const SamplerStrategy& strategy, std::size_t num_layers, Rng& rng) {
  check_batch(graph, batch_nodes);
  const auto& adj = graph.adjacency;
  SubgraphBatch out;

  if (std::holds_alternative<FullGraph>(strategy)) {
    out.nodes.resize(graph.num_nodes());
    std::iota(out.nodes.begin(), out.nodes.end(), NodeId{0});
    out.targets = batch_nodes;
    out.blocks.assign(num_layers, adj);
    out.features = graph.features;
    return out;
  }

  LocalIndex index;
  for (NodeId v : batch_nodes) out.targets.push_back(index.add(v));

  if (const auto* ns = std::get_if<NeighborSampling>(&strategy)) {
    if (ns->fanouts.size() != num_layers) {
      throw ConfigError("neighbor sampling needs one fanout per layer (" +
                        std::to_string(num_layers) + "), got " +
                        std::to_string(ns->fanouts.size()));
    }
    for (std::size_t f : ns->fanouts) {
      if (f == 0) throw ConfigError("fanout must be >= 1");
    }
    // Walk from the output layer toward the input: nodes needed at layer l
    // are the frontier of layer l+1 plus their sampled neighbors.
    std::vector<Triplets> layer_edges(num_layers);
    std::vector<NodeId> frontier(batch_nodes);
    std::vector<NodeId> scratch;
    for (std::size_t l = num_layers; l-- > 0;) {
      const std::size_t fanout = ns->fanouts[l];
      std::vector<NodeId> next = frontier;
      for (NodeId v : frontier) {
        auto nbrs = adj.row_cols(v);
        scratch.assign(nbrs.begin(), nbrs.end());
        if (scratch.size() > fanout) {
          // Partial Fisher-Yates: first `fanout` slots become a uniform subset.
          for (std::size_t i = 0; i < fanout; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, scratch.size() - 1);
            std::swap(scratch[i], scratch[pick(rng)]);
          }
          scratch.resize(fanout);
        }
        NodeId lv = index.at(v);
        for (NodeId u : scratch) {
          if (!index.has(u)) next.push_back(u);
          layer_edges[l].emplace_back(lv, index.add(u), 1.0);
        }
      }
      frontier = std::move(next);
    }
    const std::size_t m = index.size();
    for (auto& edges : layer_edges) {
      out.blocks.push_back(CsrMatrix<double>::from_triplets(m, m, std::move(edges)));
    }
  } else {
    const auto& rn = std::get<RandomNodeSampling>(strategy);
    if (rn.size == 0) throw ConfigError("random-node sample size must be >= 1");
    const std::size_t target = std::min(rn.size, graph.num_nodes());
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(graph.num_nodes() - 1));
    while (index.size() < target) index.add(pick(rng));
    const std::size_t m = index.size();
    Triplets edges;
    for (std::size_t k = 0; k < m; ++k) {
      for (NodeId u : adj.row_cols(index.nodes()[k])) {
        if (index.has(u)) edges.emplace_back(static_cast<std::uint32_t>(k), index.at(u), 1.0);
      }
    }
    auto block = CsrMatrix<double>::from_triplets(m, m, std::move(edges));
    out.blocks.assign(num_layers, block);
  }

  out.nodes = std::move(index.nodes());
  out.features = gather_rows(graph.features, out.nodes);
  return out;
}

}  // namespace mlpinit
