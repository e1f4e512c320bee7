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

#include <cstddef>
#include <cstdint>

namespace mlpinit {

// Median wall-clock milliseconds for the two halves of a GCN layer: feature
// transformation Z = XW and neighbor aggregation H = AZ.
struct OpTimingReport {
  double forward_xw = 0.0;
  double backward_xw = 0.0;
  double forward_az = 0.0;
  double backward_az = 0.0;
  std::size_t nnz = 0;

  double total_xw() const { return forward_xw + backward_xw; }
  double total_az() const { return forward_az + backward_az; }
  /// total(AZ) / total(XW).
  double ratio() const;
};

/// Times both operations on synthetic 32-bit operands: X[n×d], W[d×d], and a
/// random n×n adjacency with the given edge density. Backward passes compute
/// the input gradients a training step needs (XᵀG and GWᵀ for the dense op,
/// AᵀG for the sparse one, including building Aᵀ).
OpTimingReport measure_op_times(std::size_t n, std::size_t d, double density,
                                std::size_t repeats, std::uint64_t seed);

}  // namespace mlpinit
