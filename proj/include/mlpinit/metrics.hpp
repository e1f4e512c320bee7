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

#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "mlpinit/graph.hpp"
#include "mlpinit/linalg.hpp"

namespace mlpinit {

/// Fraction of rows in `rows` whose argmax logit equals labels[row]. Ties in
/// the argmax resolve to the lowest class index.
template <typename T>
double accuracy(const Matrix<T>& logits, std::span<const int> labels, std::span<const NodeId> rows);

template <typename T>
int argmax_row(const Matrix<T>& logits, std::size_t row);

/// Raw inner products hᵢ·hⱼ for each pair.
template <typename T>
std::vector<double> link_logits(const Matrix<T>& h, std::span<const Edge> pairs);

/// sigmoid(hᵢ·hⱼ) for each pair.
template <typename T>
std::vector<double> decode_links(const Matrix<T>& h, std::span<const Edge> pairs);

double sigmoid(double x);

inline const std::vector<int> kDefaultHitsK = {10, 20, 50, 100};

struct RankMetrics {
  double auc = 0.0;
  double ap = 0.0;
  std::map<int, double> hits;
};

/// AUC = P(pos > neg) + ½·P(pos = neg) over all pairs; AP sums
/// (Rₙ − Rₙ₋₁)·Pₙ over descending score groups (ties grouped); Hits@K counts
/// positives strictly above the K-th largest negative of the shared pool.
RankMetrics rank_metrics(std::span<const double> pos, std::span<const double> neg,
                         std::span<const int> ks = kDefaultHitsK);

double auc_score(std::span<const double> pos, std::span<const double> neg);
double average_precision(std::span<const double> pos, std::span<const double> neg);
double hits_at_k(std::span<const double> pos, std::span<const double> neg, int k);

/// Alternative Hits@K where positive i is ranked only against its own
/// negatives neg[i].
double hits_at_k_per_positive(std::span<const double> pos,
                              const std::vector<std::vector<double>>& neg, int k);

enum class HitsMode { kSharedPool, kPerPositive };

HitsMode parse_hits_mode(std::string_view name);
std::string_view to_string(HitsMode mode);

/// rank_metrics with a selectable Hits@K convention. For kPerPositive the
/// negatives are split into pos.size() consecutive equal groups.
RankMetrics rank_metrics(std::span<const double> pos, std::span<const double> neg,
                         std::span<const int> ks, HitsMode mode);

}  // namespace mlpinit
