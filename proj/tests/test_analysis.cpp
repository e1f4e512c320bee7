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
#include <sstream>

#include "doctest.h"
#include "mlpinit/analysis.hpp"
#include "mlpinit/errors.hpp"
#include "oracles.hpp"

using namespace mlpinit;

namespace {

Graph tiny_graph(std::size_t n, std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.n = n;
  cfg.c = 2;
  cfg.d = 3;
  cfg.p_in = 0.4;
  cfg.p_out = 0.05;
  cfg.seed = seed;
  Graph g = generate_synthetic(cfg);
  g.splits = split_nodes(n, {0.6, 0.2, 0.2}, seed);
  return g;
}

ModelConfig sage(std::size_t in, std::size_t out) {
  Architecture a;
  a.hidden = 8;
  return build_model(a, in, out);
}

std::vector<double> column_norms(const Matrix<double>& m) {
  std::vector<double> out(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    long double s = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) s += static_cast<long double>(m(r, c)) * m(r, c);
    out[c] = static_cast<double>(std::sqrt(s));
  }
  return out;
}

}  // namespace

TEST_CASE("filter-normalized directions match the filter norms of the weights") {
  auto cfg = sage(5, 3);
  auto params = init_params<double>(cfg, 2);
  std::mt19937_64 rng(1);
  for (auto& t : params) {
    for (double& v : t.value.values()) v = std::normal_distribution<double>(0, 1)(rng);
  }
  auto dirs = filter_normalized_directions(params, 7);
  for (const auto* d : {&dirs.d1, &dirs.d2}) {
    REQUIRE(d->shapes() == params.shapes());
    for (std::size_t t = 0; t < params.size(); ++t) {
      auto want = filter_norms(params[t]);
      auto got = filter_norms((*d)[t]);
      REQUIRE(want.size() == got.size());
      for (std::size_t k = 0; k < want.size(); ++k) {
        // Exact up to the rounding of one rescale in double.
        CHECK(std::abs(got[k] - want[k]) <= 4 * std::numeric_limits<double>::epsilon() * want[k]);
      }
      if (params[t].dims.size() == 2) {
        auto oracle_norms = column_norms(params[t].value);
        REQUIRE(oracle_norms.size() == want.size());
        for (std::size_t k = 0; k < want.size(); ++k) {
          CHECK(std::abs(oracle_norms[k] - want[k]) <= 4 * std::numeric_limits<double>::epsilon() * want[k]);
        }
      }
    }
  }
  CHECK_FALSE(dirs.d1 == dirs.d2);
}

TEST_CASE("directions are seed-deterministic and vanish for zero params") {
  auto cfg = sage(4, 2);
  auto params = init_params<float>(cfg, 1);
  auto a = filter_normalized_directions(params, 3);
  auto b = filter_normalized_directions(params, 3);
  CHECK(a.d1 == b.d1);
  CHECK(a.d2 == b.d2);
  CHECK_FALSE(filter_normalized_directions(params, 4).d1 == a.d1);
  auto zero = params.zeros_like();
  auto z = filter_normalized_directions(zero, 3);
  CHECK(z.d1 == zero);
  CHECK(z.d2 == zero);
}

TEST_CASE("grid_axis is symmetric with an exact zero") {
  auto axis = grid_axis({1.0, 21});
  REQUIRE(axis.size() == 21);
  CHECK(axis[10] == 0.0);
  CHECK(axis.front() == -1.0);
  CHECK(axis.back() == 1.0);
  for (std::size_t i = 0; i < 21; ++i) CHECK(axis[i] == -axis[20 - i]);
  CHECK_THROWS_AS(grid_axis({1.0, 4}), ConfigError);
  CHECK_THROWS_AS(grid_axis({1.0, 1}), ConfigError);
  CHECK_THROWS_AS(grid_axis({0.0, 5}), ConfigError);
}

TEST_CASE("loss grid: exact center and pointwise re-evaluation") {
  Graph g = tiny_graph(10, 3);
  auto cfg = sage(g.feature_dim(), 2);
  auto params = init_params<float>(cfg, 5);
  Evaluator<float> ev(cfg, g, NodeClassification{});
  auto dirs = filter_normalized_directions(params, 9);
  auto grid = loss_grid(ev, params, dirs, {0.5, 3});
  CHECK(grid.losses(1, 1) == ev.loss(params));
  CHECK(grid.base_loss == ev.loss(params));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(grid.losses(i, j) == ev.loss(perturb(params, dirs, grid.alphas[i], grid.betas[j])));
  const double f = low_loss_fraction(grid, 0.1);
  CHECK((f > 0.0 && f <= 1.0));
  CHECK(low_loss_fraction(grid, 1e9) == 1.0);
}

TEST_CASE("loss grid is symmetric under swapping the two directions") {
  Graph g = tiny_graph(16, 2);
  auto cfg = sage(g.feature_dim(), 2);
  auto params = init_params<double>(cfg, 1);
  Evaluator<double> ev(cfg, g, NodeClassification{});
  auto dirs = filter_normalized_directions(params, 4);
  DirectionPair<double> swapped{dirs.d2, dirs.d1, dirs.seed};
  auto a = loss_grid(ev, params, dirs, {1.0, 5});
  auto b = loss_grid(ev, params, swapped, {1.0, 5});
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(a.losses(i, j) - b.losses(j, i)) <= 1e-12);
}

TEST_CASE("non-finite grid points become +inf rather than aborting") {
  Graph g = tiny_graph(10, 1);
  auto cfg = sage(g.feature_dim(), 2);
  auto params = init_params<float>(cfg, 1);
  Evaluator<float> ev(cfg, g, NodeClassification{});
  auto dirs = filter_normalized_directions(params, 1);
  for (auto& t : dirs.d1) t.value.fill(3e38f);
  auto grid = loss_grid(ev, params, dirs, {1.0, 3});
  CHECK(std::isinf(grid.losses(0, 1)));
  CHECK(std::isfinite(grid.losses(1, 1)));
}

TEST_CASE("pca on collinear snapshots has a vanishing second component") {
  std::mt19937_64 rng(3);
  auto dir = oracle::random_matrix(1, 50, rng);
  std::vector<std::vector<double>> snaps;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> s(50);
    for (std::size_t k = 0; k < 50; ++k) s[k] = 1.0 + 0.3 * i * i * dir(0, k);
    snaps.push_back(s);
  }
  auto t = pca_project(snaps);
  CHECK(t.explained_variance[0] == doctest::Approx(1.0));
  CHECK(t.explained_variance[1] <= 1e-8);
}

TEST_CASE("pca on rank-2 snapshots preserves pairwise distances") {
  std::mt19937_64 rng(5);
  auto basis = oracle::random_matrix(2, 30, rng);
  std::vector<std::vector<double>> snaps;
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double a = n(rng), b = n(rng);
    std::vector<double> s(30);
    for (std::size_t k = 0; k < 30; ++k) s[k] = 2.0 + a * basis(0, k) + b * basis(1, k);
    snaps.push_back(s);
  }
  auto t = pca_project(snaps);
  CHECK(t.explained_variance[0] + t.explained_variance[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(t.explained_variance[0] >= t.explained_variance[1]);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      double full = 0;
      for (std::size_t k = 0; k < 30; ++k) full += (snaps[i][k] - snaps[j][k]) * (snaps[i][k] - snaps[j][k]);
      const double dx = t.coords(i, 0) - t.coords(j, 0), dy = t.coords(i, 1) - t.coords(j, 1);
      CHECK(std::abs(std::sqrt(full) - std::sqrt(dx * dx + dy * dy)) <= 1e-8);
    }
}

TEST_CASE("pca projection is invariant to snapshot order up to sign") {
  std::mt19937_64 rng(8);
  std::vector<std::vector<double>> snaps;
  for (int i = 0; i < 7; ++i) {
    auto r = oracle::random_matrix(1, 12, rng);
    snaps.emplace_back(r.values().begin(), r.values().end());
  }
  auto a = pca_project(snaps);
  std::vector<std::size_t> perm = {3, 0, 6, 1, 5, 2, 4};
  std::vector<std::vector<double>> shuffled;
  for (auto p : perm) shuffled.push_back(snaps[p]);
  auto b = pca_project(shuffled);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(a.explained_variance[c] == doctest::Approx(b.explained_variance[c]).epsilon(1e-10));
    const double sign = (a.coords(perm[0], c) * b.coords(0, c) >= 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < 7; ++i) CHECK(std::abs(a.coords(perm[i], c) - sign * b.coords(i, c)) <= 1e-9);
  }
}

TEST_CASE("pca errors") {
  std::vector<std::vector<double>> same(4, std::vector<double>(5, 1.0));
  CHECK_THROWS_AS(pca_project(same), DegenerateError);
  CHECK_THROWS_AS(pca_project(std::vector<std::vector<double>>(2, std::vector<double>(3))), ConfigError);
}

TEST_CASE("weight histogram counts") {
  auto cfg = sage(6, 3);
  auto params = init_params<float>(cfg, 1);
  std::size_t weights = 0, all = 0;
  for (const auto& t : params) {
    all += t.value.size();
    if (t.dims.size() == 2) weights += t.value.size();
  }
  auto counts = weight_histogram(params, 10, -1.0, 1.0);
  CHECK(std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == weights);
  auto with_bias = weight_histogram(params, 10, -1.0, 1.0, true);
  CHECK(std::accumulate(with_bias.begin(), with_bias.end(), std::size_t{0}) == all);
  auto zero = weight_histogram(params.zeros_like(), 4, -1.0, 1.0);
  CHECK(zero == std::vector<std::size_t>{0, 0, weights, 0});
  // Out-of-range values clamp into the edge bins.
  ParamSet<double> wide;
  wide.add("w", {1, 3}, Matrix<double>::from_rows({{-10.0, 0.1, 10.0}}));
  CHECK(weight_histogram(wide, 2, -1.0, 1.0) == std::vector<std::size_t>{1, 2});
  CHECK_THROWS_AS(weight_histogram(wide, 0, -1.0, 1.0), ConfigError);
}

TEST_CASE("gaussian samples put ~68% of mass within one standard deviation") {
  std::mt19937_64 rng(11);
  ParamSet<double> p;
  p.add("w", {100, 1000}, oracle::random_matrix(100, 1000, rng));
  auto counts = weight_histogram(p, 40, -4.0, 4.0);
  std::size_t inside = 0;
  for (std::size_t b = 15; b < 25; ++b) inside += counts[b];  // [-1, 1)
  CHECK(std::abs(static_cast<double>(inside) / 1e5 - 0.682689492) <= 0.02);
}

TEST_CASE("analysis writers emit the documented tables") {
  LandscapeGrid g;
  g.alphas = g.betas = {-1, 0, 1};
  g.losses = Matrix<double>(3, 3, 0.5);
  g.direction_seed = 4;
  g.base_loss = 0.5;
  std::ostringstream a;
  write_landscape(a, g);
  CHECK(a.str().rfind("# direction_seed=4 base_loss=0.5\nalpha,beta,loss\n-1,-1,0.5\n", 0) == 0);
  Trajectory t;
  t.epochs = {0, 1};
  t.phases = {"mlp", "gnn"};
  t.coords = Matrix<double>::from_rows({{1, 2}, {3, 4}});
  std::ostringstream b;
  write_trajectory(b, t);
  CHECK(b.str() == "epoch,phase,x,y\n0,mlp,1,2\n1,gnn,3,4\n");
  std::ostringstream c;
  write_histogram(c, {1, 2}, -1, 1);
  CHECK(c.str() == "bin_left,bin_right,count\n-1,0,1\n0,1,2\n");
}
