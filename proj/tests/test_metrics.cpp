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

#include <random>

#include "doctest.h"
#include "mlpinit/errors.hpp"
#include "mlpinit/metrics.hpp"
#include "oracles.hpp"

using namespace mlpinit;

namespace {

std::vector<double> draw_scores(std::size_t n, std::mt19937_64& rng, bool coarse) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::uniform_int_distribution<int> q(0, 6);
  std::vector<double> v(n);
  for (double& x : v) x = coarse ? q(rng) / 3.0 : d(rng);
  return v;
}

}  // namespace

TEST_CASE("accuracy examples") {
  auto logits = Matrix<double>::from_rows({{3, 1}, {0, 2}, {5, 5}});
  std::vector<int> labels = {0, 1, 0};
  std::vector<NodeId> all = {0, 1, 2};
  CHECK(accuracy(logits, labels, all) == 1.0);  // tie → class 0
  std::vector<NodeId> one = {1};
  std::vector<int> wrong = {0, 0, 0};
  CHECK(accuracy(logits, wrong, one) == 0.0);
  CHECK_THROWS_AS(accuracy(logits, labels, std::span<const NodeId>{}), ConfigError);
  CHECK(argmax_row(logits, 2) == 0);
}

TEST_CASE("always-class-0 logits on balanced labels score a quarter") {
  const std::size_t n = 400;
  Matrix<float> logits(n, 4);
  std::vector<int> labels(n);
  std::vector<NodeId> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    logits(i, 0) = 1.0f;
    labels[i] = static_cast<int>(i % 4);
    rows[i] = static_cast<NodeId>(i);
  }
  CHECK(accuracy(logits, labels, rows) == 0.25);
}

TEST_CASE("accuracy equals a counting oracle") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    auto logits = oracle::random_matrix(30, 5, rng);
    std::vector<int> labels(30);
    std::uniform_int_distribution<int> c(0, 4);
    for (int& l : labels) l = c(rng);
    std::vector<NodeId> rows;
    for (NodeId i = 0; i < 30; i += 1 + trial % 3) rows.push_back(i);
    std::size_t hits = 0;
    for (NodeId r : rows) {
      int best = 0;
      for (int k = 1; k < 5; ++k) if (logits(r, k) > logits(r, best)) best = k;
      hits += best == labels[r] ? 1 : 0;
    }
    CHECK(accuracy(logits, labels, rows) == static_cast<double>(hits) / static_cast<double>(rows.size()));
  }
}

TEST_CASE("decode_links closed forms and symmetry") {
  auto h = Matrix<double>::from_rows({{1, 0}, {1, 0}, {0, 1}});
  std::vector<Edge> pairs = {{0, 1}, {0, 2}, {1, 0}, {2, 0}};
  auto s = decode_links(h, pairs);
  CHECK(s[0] == doctest::Approx(0.7310585786300049).epsilon(1e-15));
  CHECK(s[1] == 0.5);
  CHECK(s[0] == s[2]);
  CHECK(s[1] == s[3]);
  std::vector<Edge> bad = {{0, 3}};
  CHECK_THROWS_AS(decode_links(h, bad), RangeError);
  CHECK(link_logits(h, pairs)[0] == 1.0);
}

TEST_CASE("rank_metrics hand examples") {
  std::vector<double> pos = {0.9, 0.8}, neg = {0.1, 0.2, 0.3};
  auto m = rank_metrics(pos, neg);
  CHECK(m.auc == 1.0);
  CHECK(m.ap == 1.0);
  for (auto [k, v] : m.hits) CHECK(v == 1.0);

  std::vector<double> p1 = {0.8}, n1 = {0.9, 0.1};
  CHECK(auc_score(p1, n1) == 0.5);

  std::vector<double> p2 = {0.9, 0.5}, n2 = {0.8, 0.7, 0.6};
  CHECK(hits_at_k(p2, n2, 1) == 0.5);
  CHECK_THROWS_AS(rank_metrics(std::span<const double>{}, n2), ConfigError);
  CHECK_THROWS_AS(rank_metrics(p2, std::span<const double>{}), ConfigError);
}

TEST_CASE("rank_metrics equals the brute-force oracle") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size(1, 100);
  const std::vector<int> ks = {1, 3, 10, 20, 50, 100};
  for (int trial = 0; trial < 200; ++trial) {
    const bool coarse = trial % 2 == 0;  // many ties
    auto pos = draw_scores(size(rng), rng, coarse);
    auto neg = draw_scores(size(rng), rng, coarse);
    auto m = rank_metrics(pos, neg, ks);
    CHECK(m.auc == oracle::pairwise_auc(pos, neg));
    CHECK(std::abs(m.ap - oracle::threshold_ap(pos, neg)) <= 1e-12);
    for (int k : ks) CHECK(m.hits.at(k) == oracle::counting_hits(pos, neg, k));
  }
}

TEST_CASE("AUC is invariant under strictly monotone transforms") {
  std::mt19937_64 rng(5);
  auto pos = draw_scores(40, rng, false), neg = draw_scores(60, rng, false);
  const double auc = auc_score(pos, neg);
  auto tp = pos, tn = neg;
  for (double& v : tp) v = std::exp(3 * v) + 1;
  for (double& v : tn) v = std::exp(3 * v) + 1;
  CHECK(auc_score(tp, tn) == auc);
  CHECK(average_precision(tp, tn) == average_precision(pos, neg));
}

TEST_CASE("Hits@K is nondecreasing in K") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    auto pos = draw_scores(30, rng, trial % 2 == 0), neg = draw_scores(150, rng, trial % 2 == 0);
    double prev = 0.0;
    for (int k = 1; k <= 160; ++k) {
      const double h = hits_at_k(pos, neg, k);
      CHECK(h >= prev);
      prev = h;
    }
  }
}

TEST_CASE("fewer negatives than K counts every positive") {
  std::vector<double> pos = {-5.0, 0.0}, neg = {1.0, 2.0};
  CHECK(hits_at_k(pos, neg, 10) == 1.0);
  CHECK(hits_at_k(pos, neg, 2) == 0.0);
}

TEST_CASE("per-positive Hits@K") {
  std::vector<double> pos = {0.9, 0.4};
  std::vector<std::vector<double>> neg = {{0.1, 0.95}, {0.3, 0.2}};
  CHECK(hits_at_k_per_positive(pos, neg, 1) == 0.5);
  CHECK(hits_at_k_per_positive(pos, neg, 2) == 1.0);
  std::vector<double> flat = {0.1, 0.95, 0.3, 0.2};
  std::vector<int> ks = {1};
  CHECK(rank_metrics(pos, flat, ks, HitsMode::kPerPositive).hits.at(1) == 0.5);
  CHECK(rank_metrics(pos, flat, ks, HitsMode::kSharedPool).hits.at(1) == 0.0);
  std::vector<double> odd = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(rank_metrics(pos, odd, ks, HitsMode::kPerPositive), ShapeError);
  CHECK(parse_hits_mode("per-positive") == HitsMode::kPerPositive);
  CHECK(to_string(HitsMode::kSharedPool) == "shared");
  CHECK_THROWS_AS(parse_hits_mode("pool"), ConfigError);
}

TEST_CASE("rank metrics stay in [0,1]") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = rank_metrics(draw_scores(20, rng, true), draw_scores(30, rng, true));
    for (double v : {m.auc, m.ap}) CHECK((v >= 0.0 && v <= 1.0));
    for (auto [k, v] : m.hits) CHECK((v >= 0.0 && v <= 1.0));
  }
}
