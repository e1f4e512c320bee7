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

#include "mlpinit/optimizer.hpp"

#include <cmath>

#include "mlpinit/errors.hpp"

namespace mlpinit {

template <typename T>
OptimizerState<T> OptimizerState<T>::zeros_like(const ParamSet<T>& params) {
  OptimizerState s;
  s.first_moment = params.zeros_like();
  s.second_moment = params.zeros_like();
  return s;
}

template <typename T>
void adam_step(ParamSet<T>& params, const ParamSet<T>& grads, OptimizerState<T>& state,
               double learning_rate, double weight_decay) {
  const auto shapes = params.shapes();
  if (grads.shapes() != shapes || state.first_moment.shapes() != shapes ||
      state.second_moment.shapes() != shapes) {
    throw ShapeError("adam_step: parameter, gradient and moment shapes differ");
  }
  state.step += 1;
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto w = params[i].value.values();
    auto g = grads[i].value.values();
    auto m = state.first_moment[i].value.values();
    auto v = state.second_moment[i].value.values();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double gk = static_cast<double>(g[k]) + weight_decay * static_cast<double>(w[k]);
      const double mk = b1 * static_cast<double>(m[k]) + (1.0 - b1) * gk;
      const double vk = b2 * static_cast<double>(v[k]) + (1.0 - b2) * gk * gk;
      m[k] = static_cast<T>(mk);
      v[k] = static_cast<T>(vk);
      const double update = learning_rate * (mk / c1) / (std::sqrt(vk / c2) + state.epsilon);
      w[k] = static_cast<T>(static_cast<double>(w[k]) - update);
    }
  }
}

template struct OptimizerState<float>;
template struct OptimizerState<double>;
template void adam_step(ParamSet<float>&, const ParamSet<float>&, OptimizerState<float>&, double, double);
template void adam_step(ParamSet<double>&, const ParamSet<double>&, OptimizerState<double>&, double, double);

}  // namespace mlpinit
