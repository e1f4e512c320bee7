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

#include "mlpinit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "mlpinit/errors.hpp"

namespace mlpinit {

template <typename T>
int argmax_row(const Matrix<T>& logits, std::size_t row) {
  auto r = logits.row(row);
  std::size_t best = 0;
  for (std::size_t c = 1; c < r.size(); ++c) {
    if (r[c] > r[best]) best = c;
  }
  return static_cast<int>(best);
}

template <typename T>
double accuracy(const Matrix<T>& logits, std::span<const int> labels, std::span<const NodeId> rows) {
  if (rows.empty()) throw ConfigError("accuracy: empty mask");
  std::size_t correct = 0;
  for (NodeId r : rows) {
    if (r >= logits.rows() || r >= labels.size()) throw RangeError("accuracy: row out of range");
    if (argmax_row(logits, r) == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

template <typename T>
std::vector<double> link_logits(const Matrix<T>& h, std::span<const Edge> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& e : pairs) {
    if (e.u >= h.rows() || e.v >= h.rows()) {
      throw RangeError("decode_links: pair (" + std::to_string(e.u) + ", " +
                       std::to_string(e.v) + ") out of range");
    }
    auto a = h.row(e.u);
    auto b = h.row(e.v);
    T acc = T(0);
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

template <typename T>
std::vector<double> decode_links(const Matrix<T>& h, std::span<const Edge> pairs) {
  auto out = link_logits(h, pairs);
  for (auto& v : out) v = sigmoid(v);
  return out;
}

namespace {

void require_nonempty(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw ConfigError("rank metrics need non-empty score lists");
}

}  // namespace

double auc_score(std::span<const double> pos, std::span<const double> neg) {
  require_nonempty(pos, neg);
  std::vector<double> p(pos.begin(), pos.end());
  std::vector<double> n(neg.begin(), neg.end());
  std::sort(p.begin(), p.end());
  std::sort(n.begin(), n.end());
  // Twice the Mann-Whitney count: 2 per strictly-lower negative, 1 per tie.
  std::uint64_t twice = 0;
  std::size_t below = 0, upto = 0;
  for (double s : p) {
    while (below < n.size() && n[below] < s) ++below;
    upto = std::max(upto, below);
    while (upto < n.size() && n[upto] <= s) ++upto;
    twice += 2 * below + (upto - below);
  }
  return static_cast<double>(twice) /
         (2.0 * static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

double average_precision(std::span<const double> pos, std::span<const double> neg) {
  require_nonempty(pos, neg);
  std::vector<std::pair<double, bool>> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.emplace_back(s, true);
  for (double s : neg) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const double total_pos = static_cast<double>(pos.size());
  std::size_t tp = 0, fp = 0;
  double ap = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i, dtp = 0;
    while (j < all.size() && all[j].first == all[i].first) {
      if (all[j].second) {
        ++dtp;
      } else {
        ++fp;
      }
      ++j;
    }
    tp += dtp;
    ap += (static_cast<double>(dtp) / total_pos) *
          (static_cast<double>(tp) / static_cast<double>(tp + fp));
    i = j;
  }
  return ap;
}

double hits_at_k(std::span<const double> pos, std::span<const double> neg, int k) {
  require_nonempty(pos, neg);
  if (k < 1) throw ConfigError("Hits@K needs K >= 1");
  const auto kk = static_cast<std::size_t>(k);
  std::size_t hits = 0;
  if (neg.size() < kk) {
    hits = pos.size();
  } else {
    std::vector<double> n(neg.begin(), neg.end());
    std::nth_element(n.begin(), n.begin() + (kk - 1), n.end(), std::greater<>());
    const double threshold = n[kk - 1];
    for (double s : pos) hits += s > threshold ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(pos.size());
}

double hits_at_k_per_positive(std::span<const double> pos,
                              const std::vector<std::vector<double>>& neg, int k) {
  if (pos.empty()) throw ConfigError("rank metrics need non-empty score lists");
  if (neg.size() != pos.size()) throw ShapeError("per-positive Hits@K needs one negative list per positive");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (neg[i].empty()) throw ConfigError("per-positive Hits@K: empty negative list");
    hits += hits_at_k(pos.subspan(i, 1), neg[i], k) > 0.0 ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(pos.size());
}

RankMetrics rank_metrics(std::span<const double> pos, std::span<const double> neg,
                         std::span<const int> ks) {
  RankMetrics m;
  m.auc = auc_score(pos, neg);
  m.ap = average_precision(pos, neg);
  for (int k : ks) m.hits[k] = hits_at_k(pos, neg, k);
  return m;
}

HitsMode parse_hits_mode(std::string_view name) {
  if (name == "shared") return HitsMode::kSharedPool;
  if (name == "per-positive") return HitsMode::kPerPositive;
  throw ConfigError("unknown hits mode '" + std::string(name) + "' (expected shared or per-positive)");
}

std::string_view to_string(HitsMode mode) {
  return mode == HitsMode::kSharedPool ? "shared" : "per-positive";
}

RankMetrics rank_metrics(std::span<const double> pos, std::span<const double> neg,
                         std::span<const int> ks, HitsMode mode) {
  if (mode == HitsMode::kSharedPool) return rank_metrics(pos, neg, ks);
  require_nonempty(pos, neg);
  if (neg.size() % pos.size() != 0) {
    throw ShapeError("per-positive Hits@K needs the same number of negatives for every positive");
  }
  const std::size_t group = neg.size() / pos.size();
  std::vector<std::vector<double>> groups(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    groups[i].assign(neg.begin() + static_cast<std::ptrdiff_t>(i * group),
                     neg.begin() + static_cast<std::ptrdiff_t>((i + 1) * group));
  }
  RankMetrics m;
  m.auc = auc_score(pos, neg);
  m.ap = average_precision(pos, neg);
  for (int k : ks) m.hits[k] = hits_at_k_per_positive(pos, groups, k);
  return m;
}

template double accuracy(const Matrix<float>&, std::span<const int>, std::span<const NodeId>);
template double accuracy(const Matrix<double>&, std::span<const int>, std::span<const NodeId>);
template int argmax_row(const Matrix<float>&, std::size_t);
template int argmax_row(const Matrix<double>&, std::size_t);
template std::vector<double> link_logits(const Matrix<float>&, std::span<const Edge>);
template std::vector<double> link_logits(const Matrix<double>&, std::span<const Edge>);
template std::vector<double> decode_links(const Matrix<float>&, std::span<const Edge>);
template std::vector<double> decode_links(const Matrix<double>&, std::span<const Edge>);

}  // namespace mlpinit
