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

#include "mlpinit/loss.hpp"

#include <cmath>
#include <string>

#include "mlpinit/errors.hpp"

namespace mlpinit {

template <typename T>
LossGrad<T> cross_entropy(const Matrix<T>& logits, std::span<const int> labels,
                          std::span<const NodeId> rows) {
  if (rows.empty()) throw ConfigError("cross_entropy: empty mask");
  if (labels.size() != logits.rows()) {
    throw ShapeError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(logits.rows()) + " rows");
  }
  const std::size_t classes = logits.cols();
  const double inv_batch = 1.0 / static_cast<double>(rows.size());
  LossGrad<T> out{0.0, Matrix<T>(logits.rows(), classes)};
  std::vector<double> p(classes);
  for (NodeId r : rows) {
    if (r >= logits.rows()) throw RangeError("cross_entropy: row " + std::to_string(r) + " out of range");
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw RangeError("cross_entropy: label " + std::to_string(y) + " outside [0, " +
                       std::to_string(classes) + ")");
    }
    auto x = logits.row(r);
    double mx = static_cast<double>(x[0]);
    for (std::size_t c = 1; c < classes; ++c) mx = std::max(mx, static_cast<double>(x[c]));
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      p[c] = std::exp(static_cast<double>(x[c]) - mx);
      sum += p[c];
    }
    out.loss += (mx + std::log(sum) - static_cast<double>(x[y])) * inv_batch;
    auto g = out.grad.row(r);
    for (std::size_t c = 0; c < classes; ++c) {
      double d = p[c] / sum - (static_cast<int>(c) == y ? 1.0 : 0.0);
      g[c] = static_cast<T>(g[c] + d * inv_batch);
    }
  }
  return out;
}

BceResult bce_with_logits(std::span<const double> scores, std::span<const double> targets) {
  if (scores.size() != targets.size()) throw ShapeError("bce_with_logits: length mismatch");
  if (scores.empty()) throw ConfigError("bce_with_logits: no scores");
  const double inv = 1.0 / static_cast<double>(scores.size());
  BceResult out;
  out.grad.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double x = scores[i];
    const double y = targets[i];
    if (y != 0.0 && y != 1.0) throw RangeError("bce_with_logits: target must be 0 or 1");
    out.loss += (std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)))) * inv;
    const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    out.grad[i] = (s - y) * inv;
  }
  return out;
}

template LossGrad<float> cross_entropy(const Matrix<float>&, std::span<const int>, std::span<const NodeId>);
template LossGrad<double> cross_entropy(const Matrix<double>&, std::span<const int>, std::span<const NodeId>);

}  // namespace mlpinit
