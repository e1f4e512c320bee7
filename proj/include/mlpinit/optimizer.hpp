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

#include "mlpinit/model.hpp"

namespace mlpinit {

template <typename T>
struct OptimizerState {
  ParamSet<T> first_moment;
  ParamSet<T> second_moment;
  std::uint64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  /// Zero moments shaped like `params`.
  static OptimizerState zeros_like(const ParamSet<T>& params);
};

/// One Adam update with L2 weight decay folded into the gradient
/// (g + weight_decay·w), followed by the bias-corrected step.
template <typename T>
void adam_step(ParamSet<T>& params, const ParamSet<T>& grads, OptimizerState<T>& state,
               double learning_rate, double weight_decay);

}  // namespace mlpinit
