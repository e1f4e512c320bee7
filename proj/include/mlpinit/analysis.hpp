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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mlpinit/trainer.hpp"

namespace mlpinit {

template <typename T>
struct DirectionPair {
  ParamSet<T> d1;
  ParamSet<T> d2;
  std::uint64_t seed = 0;
};

/// Two independent Gaussian directions shaped like `params`. Every weight
/// filter (the column of a stored [in×out] weight feeding one output unit) is
/// rescaled to the norm of the matching filter of `params`; bias directions
/// are rescaled to the bias norm as a whole. Zero-norm filters give zero
/// directions.
template <typename T>
DirectionPair<T> filter_normalized_directions(const ParamSet<T>& params, std::uint64_t seed);

/// Norms of each output-unit filter (weights) or of the whole vector (bias).
template <typename T>
std::vector<double> filter_norms(const NamedTensor<T>& tensor);

struct GridSpec {
  double half_range = 1.0;
  std::size_t steps = 21;  // odd, >= 3
};

struct LandscapeGrid {
  std::vector<double> alphas;
  std::vector<double> betas;
  Matrix<double> losses;  // [alphas × betas]; +inf marks a non-finite point
  std::uint64_t direction_seed = 0;
  double base_loss = 0.0;
};

/// Symmetric grid coordinates; the middle entry is exactly 0.
std::vector<double> grid_axis(const GridSpec& spec);

template <typename T>
ParamSet<T> perturb(const ParamSet<T>& params, const DirectionPair<T>& dirs, double alpha, double beta);

/// Eval-mode full-data training loss at params + αᵢ·d1 + βⱼ·d2.
template <typename T>
LandscapeGrid loss_grid(const Evaluator<T>& evaluator, const ParamSet<T>& params,
                        const DirectionPair<T>& dirs, const GridSpec& spec = {});

/// Fraction of grid cells with loss <= base_loss + delta.
double low_loss_fraction(const LandscapeGrid& grid, double delta = 0.1);

struct Trajectory {
  std::vector<std::size_t> epochs;
  std::vector<std::string> phases;
  Matrix<double> coords;                       // [snapshots × 2]
  std::vector<double> explained_variance;      // two fractions, nonincreasing
};

/// Centers the flattened snapshots and projects them on the top two
/// principal directions (eigendecomposition of the snapshot Gram matrix).
/// Throws DegenerateError when all snapshots coincide.
Trajectory pca_project(const std::vector<std::vector<double>>& snapshots);

template <typename T>
Trajectory pca_project(const std::vector<ParamSet<T>>& snapshots);

/// Counts over all weight values (biases too when include_bias); values
/// outside [lo, hi) clamp into the edge bins.
template <typename T>
std::vector<std::size_t> weight_histogram(const ParamSet<T>& params, std::size_t bins, double lo,
                                          double hi, bool include_bias = false);

void write_landscape(std::ostream& out, const LandscapeGrid& grid);
void write_trajectory(std::ostream& out, const Trajectory& trajectory);
void write_histogram(std::ostream& out, const std::vector<std::size_t>& counts, double lo, double hi);

}  // namespace mlpinit
