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

#include "mlpinit/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mlpinit/errors.hpp"
#include "mlpinit/parallel.hpp"

namespace mlpinit {

namespace {

template <typename T>
void check_shapes(const CsrMatrix<T>& adjacency, const Matrix<T>& h) {
  if (adjacency.rows() != adjacency.cols()) throw ShapeError("aggregate: adjacency must be square");
  if (adjacency.cols() != h.rows()) {
    throw ShapeError("aggregate: adjacency has " + std::to_string(adjacency.cols()) +
                     " columns but h has " + std::to_string(h.rows()) + " rows");
  }
}

// Indices (into the row's neighbor list) of the median element(s) for one
// feature. Sorting by (value, position) fixes the choice among ties.
template <typename T>
std::pair<std::size_t, std::size_t> median_positions(std::span<const std::uint32_t> nbrs,
                                                     const Matrix<T>& h, std::size_t f,
                                                     std::vector<std::pair<T, std::size_t>>& buf) {
  buf.clear();
  for (std::size_t k = 0; k < nbrs.size(); ++k) buf.emplace_back(h(nbrs[k], f), k);
  std::sort(buf.begin(), buf.end());
  const std::size_t m = buf.size();
  if (m % 2 == 1) return {buf[m / 2].second, buf[m / 2].second};
  return {buf[m / 2 - 1].second, buf[m / 2].second};
}

}  // namespace

template <typename T>
Matrix<T> aggregate(const Aggregator& agg, const CsrMatrix<T>& adjacency, const Matrix<T>& h) {
  agg.validate();
  check_shapes(adjacency, h);
  const std::size_t d = h.cols();
  Matrix<T> out(adjacency.rows(), d);
  const T t = static_cast<T>(agg.temperature);

  parallel_for_rows(adjacency.rows(), [&](std::size_t begin, std::size_t end) {
    std::vector<std::pair<T, std::size_t>> buf;
    std::vector<T> expv;
    for (std::size_t i = begin; i < end; ++i) {
      auto nbrs = adjacency.row_cols(i);
      if (nbrs.empty()) continue;
      auto dst = out.row(i);
      switch (agg.type) {
        case AggregatorType::kMean: {
          for (auto j : nbrs) {
            auto src = h.row(j);
            for (std::size_t f = 0; f < d; ++f) dst[f] += src[f];
          }
          const T deg = static_cast<T>(nbrs.size());
          for (std::size_t f = 0; f < d; ++f) dst[f] /= deg;
          break;
        }
        case AggregatorType::kMax: {
          auto first = h.row(nbrs[0]);
          std::copy(first.begin(), first.end(), dst.begin());
          for (std::size_t k = 1; k < nbrs.size(); ++k) {
            auto src = h.row(nbrs[k]);
            for (std::size_t f = 0; f < d; ++f) dst[f] = std::max(dst[f], src[f]);
          }
          break;
        }
        case AggregatorType::kMedian: {
          for (std::size_t f = 0; f < d; ++f) {
            auto [a, b] = median_positions(nbrs, h, f, buf);
            dst[f] = a == b ? h(nbrs[a], f) : T(0.5) * (h(nbrs[a], f) + h(nbrs[b], f));
          }
          break;
        }
        case AggregatorType::kSoftmax: {
          // (Σ e_j x_j) / Σ e_j with e_j = exp(t (x_j − max)); at t = 0 this
          // is bitwise the mean.
          expv.resize(nbrs.size());
          for (std::size_t f = 0; f < d; ++f) {
            T mx = h(nbrs[0], f);
            for (auto j : nbrs) mx = std::max(mx, h(j, f));
            T num = T(0), den = T(0);
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
              T x = h(nbrs[k], f);
              T e = std::exp(t * (x - mx));
              num += e * x;
              den += e;
            }
            dst[f] = num / den;
          }
          break;
        }
      }
    }
  });
  return out;
}

template <typename T>
Matrix<T> aggregate_backward(const Aggregator& agg, const CsrMatrix<T>& adjacency,
                             const Matrix<T>& h, const Matrix<T>& grad_out) {
  agg.validate();
  check_shapes(adjacency, h);
  if (grad_out.rows() != adjacency.rows() || grad_out.cols() != h.cols()) {
    throw ShapeError("aggregate_backward: grad_out shape mismatch");
  }
  const std::size_t d = h.cols();
  const T t = static_cast<T>(agg.temperature);
  Matrix<T> grad(h.rows(), d);
  std::vector<std::pair<T, std::size_t>> buf;
  std::vector<T> weights;

  // Scatter into neighbor rows sequentially in row order.
  for (std::size_t i = 0; i < adjacency.rows(); ++i) {
    auto nbrs = adjacency.row_cols(i);
    if (nbrs.empty()) continue;
    auto g = grad_out.row(i);
    switch (agg.type) {
      case AggregatorType::kMean: {
        const T deg = static_cast<T>(nbrs.size());
        for (auto j : nbrs) {
          auto dst = grad.row(j);
          for (std::size_t f = 0; f < d; ++f) dst[f] += g[f] / deg;
        }
        break;
      }
      case AggregatorType::kMax: {
        for (std::size_t f = 0; f < d; ++f) {
          T mx = h(nbrs[0], f);
          for (auto j : nbrs) mx = std::max(mx, h(j, f));
          std::size_t ties = 0;
          for (auto j : nbrs) ties += h(j, f) == mx ? 1 : 0;
          const T share = g[f] / static_cast<T>(ties);
          for (auto j : nbrs) {
            if (h(j, f) == mx) grad(j, f) += share;
          }
        }
        break;
      }
      case AggregatorType::kMedian: {
        for (std::size_t f = 0; f < d; ++f) {
          auto [a, b] = median_positions(nbrs, h, f, buf);
          if (a == b) {
            grad(nbrs[a], f) += g[f];
          } else {
            grad(nbrs[a], f) += T(0.5) * g[f];
            grad(nbrs[b], f) += T(0.5) * g[f];
          }
        }
        break;
      }
      case AggregatorType::kSoftmax: {
        // d out / d x_k = w_k (1 + t (x_k − out)).
        weights.resize(nbrs.size());
        for (std::size_t f = 0; f < d; ++f) {
          T mx = h(nbrs[0], f);
          for (auto j : nbrs) mx = std::max(mx, h(j, f));
          T den = T(0), num = T(0);
          for (std::size_t k = 0; k < nbrs.size(); ++k) {
            T x = h(nbrs[k], f);
            weights[k] = std::exp(t * (x - mx));
            den += weights[k];
            num += weights[k] * x;
          }
          const T out = num / den;
          for (std::size_t k = 0; k < nbrs.size(); ++k) {
            T w = weights[k] / den;
            T x = h(nbrs[k], f);
            grad(nbrs[k], f) += g[f] * w * (T(1) + t * (x - out));
          }
        }
        break;
      }
    }
  }
  return grad;
}

template Matrix<float> aggregate(const Aggregator&, const CsrMatrix<float>&, const Matrix<float>&);
template Matrix<double> aggregate(const Aggregator&, const CsrMatrix<double>&, const Matrix<double>&);
template Matrix<float> aggregate_backward(const Aggregator&, const CsrMatrix<float>&,
                                          const Matrix<float>&, const Matrix<float>&);
template Matrix<double> aggregate_backward(const Aggregator&, const CsrMatrix<double>&,
                                           const Matrix<double>&, const Matrix<double>&);

}  // namespace mlpinit
