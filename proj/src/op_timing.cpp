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

#include "mlpinit/op_timing.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>
#include <unordered_set>
#include <vector>

#include "mlpinit/errors.hpp"
#include "mlpinit/linalg.hpp"
#include "mlpinit/rng.hpp"

namespace mlpinit {

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f) {
  auto start = Clock::now();
  f();
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

CsrMatrix<float> random_adjacency(std::size_t n, double density, Rng& rng) {
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::uint32_t> col_idx;
  std::binomial_distribution<std::size_t> count(n, density);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
  std::vector<std::uint32_t> row;
  std::bernoulli_distribution keep(density);
  for (std::size_t r = 0; r < n; ++r) {
    row.clear();
    if (density >= 0.5) {
      for (std::size_t c = 0; c < n; ++c) {
        if (keep(rng)) row.push_back(static_cast<std::uint32_t>(c));
      }
    } else {
      std::size_t k = count(rng);
      std::unordered_set<std::uint32_t> seen;
      while (row.size() < k) {
        auto c = pick(rng);
        if (seen.insert(c).second) row.push_back(c);
      }
      std::sort(row.begin(), row.end());
    }
    col_idx.insert(col_idx.end(), row.begin(), row.end());
    row_ptr[r + 1] = col_idx.size();
  }
  std::vector<float> values(col_idx.size(), 1.0f);
  return CsrMatrix<float>(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

Matrix<float> random_dense(std::size_t r, std::size_t c, Rng& rng) {
  std::normal_distribution<float> normal(0.0f, 1.0f);
  Matrix<float> m(r, c);
  for (auto& v : m.values()) v = normal(rng);
  return m;
}

}  // namespace

double OpTimingReport::ratio() const {
  double xw = total_xw();
  if (xw <= 0.0) return std::numeric_limits<double>::max();
  return total_az() / xw;
}

OpTimingReport measure_op_times(std::size_t n, std::size_t d, double density,
                                std::size_t repeats, std::uint64_t seed) {
  if (n == 0 || d == 0) throw ConfigError("measure_op_times: n and d must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) {
    throw ConfigError("measure_op_times: density must lie in (0, 1]");
  }
  repeats = std::max<std::size_t>(repeats, 1);
  Rng rng = make_rng(seed, "op_timing");
  Matrix<float> x = random_dense(n, d, rng);
  Matrix<float> w = random_dense(d, d, rng);
  Matrix<float> grad = random_dense(n, d, rng);
  CsrMatrix<float> a = random_adjacency(n, density, rng);

  std::vector<double> fxw, bxw, faz, baz;
  // Results feed a checksum so the optimizer cannot drop the work.
  volatile float sink = 0.0f;
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    Matrix<float> z;
    fxw.push_back(time_ms([&] { z = dense_matmul(x, w); }));
    bxw.push_back(time_ms([&] {
      Matrix<float> gw = matmul_transpose_a(x, grad);
      Matrix<float> gx = matmul_transpose_b(grad, w);
      sink = sink + gw(0, 0) + gx(0, 0);
    }));
    Matrix<float> h;
    faz.push_back(time_ms([&] { h = spmm(a, z); }));
    baz.push_back(time_ms([&] {
      CsrMatrix<float> at = a.transpose();
      Matrix<float> gz = spmm(at, grad);
      sink = sink + gz(0, 0);
    }));
    sink = sink + z(0, 0) + h(0, 0);
  }
  OpTimingReport report;
  report.forward_xw = median(fxw);
  report.backward_xw = median(bxw);
  report.forward_az = median(faz);
  report.backward_az = median(baz);
  report.nnz = a.nnz();
  return report;
}

}  // namespace mlpinit
