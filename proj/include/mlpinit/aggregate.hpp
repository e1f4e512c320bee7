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

#include "mlpinit/linalg.hpp"
#include "mlpinit/model.hpp"

namespace mlpinit {

// Neighbor aggregation over the row lists of `adjacency` (edge values are
// ignored). Row i of the result combines rows h[j] for every j in row i.
// Degree-0 rows produce zeros.
//   mean     arithmetic mean
//   max      per-feature maximum
//   median   per-feature median; even counts average the two middle values
//   softmax  per-feature Σ_j softmax_j(t·x)·x_j, computed with max-shift
template <typename T>
Matrix<T> aggregate(const Aggregator& agg, const CsrMatrix<T>& adjacency, const Matrix<T>& h);

/// Gradient of aggregate() w.r.t. h given the gradient of its output. max
/// splits the gradient equally across tied maxima; median routes it to the
/// selected middle element(s).
template <typename T>
Matrix<T> aggregate_backward(const Aggregator& agg, const CsrMatrix<T>& adjacency,
                             const Matrix<T>& h, const Matrix<T>& grad_out);

}  // namespace mlpinit
