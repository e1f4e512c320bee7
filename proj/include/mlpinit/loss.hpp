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

#include <span>
#include <vector>

#include "mlpinit/graph.hpp"
#include "mlpinit/linalg.hpp"

namespace mlpinit {

template <typename T>
struct LossGrad {
  double loss = 0.0;
  Matrix<T> grad;  // same shape as the logits
};

/// Mean over `rows` of −log softmax(logits[r])[labels[r]]. `labels` is
/// indexed by row; unlisted rows get a zero gradient.
template <typename T>
LossGrad<T> cross_entropy(const Matrix<T>& logits, std::span<const int> labels,
                          std::span<const NodeId> rows);

struct BceResult {
  double loss = 0.0;
  std::vector<double> grad;  // dloss/dscore
};

/// Mean binary cross-entropy on raw scores, computed as
/// max(x, 0) − x·y + log(1 + e^{−|x|}). Targets must be 0 or 1.
BceResult bce_with_logits(std::span<const double> scores, std::span<const double> targets);

}  // namespace mlpinit
