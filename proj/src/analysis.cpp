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

#include "mlpinit/analysis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "mlpinit/errors.hpp"

namespace mlpinit {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool is_bias(const std::vector<std::size_t>& dims) { return dims.size() == 1; }

// Rescales `dir` filter-by-filter to the norms of `ref`.
void rescale_like(Matrix<double>& dir, const Matrix<double>& ref, bool bias) {
  if (bias) {
    double nd = 0.0, nr = 0.0;
    for (double v : dir.values()) nd += v * v;
    for (double v : ref.values()) nr += v * v;
    nd = std::sqrt(nd);
    nr = std::sqrt(nr);
    const double s = nd > 0.0 ? nr / nd : 0.0;
    for (double& v : dir.values()) v *= s;
    return;
  }
  for (std::size_t c = 0; c < dir.cols(); ++c) {
    double nd = 0.0, nr = 0.0;
    for (std::size_t r = 0; r < dir.rows(); ++r) {
      nd += dir(r, c) * dir(r, c);
      nr += ref(r, c) * ref(r, c);
    }
    nd = std::sqrt(nd);
    nr = std::sqrt(nr);
    const double s = nd > 0.0 ? nr / nd : 0.0;
    for (std::size_t r = 0; r < dir.rows(); ++r) dir(r, c) *= s;
  }
}

}  // namespace

template <typename T>
std::vector<double> filter_norms(const NamedTensor<T>& t) {
  std::vector<double> out;
  if (is_bias(t.dims)) {
    double s = 0.0;
    for (T v : t.value.values()) s += static_cast<double>(v) * static_cast<double>(v);
    out.push_back(std::sqrt(s));
    return out;
  }
  for (std::size_t c = 0; c < t.value.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < t.value.rows(); ++r) {
      const double v = static_cast<double>(t.value(r, c));
      s += v * v;
    }
    out.push_back(std::sqrt(s));
  }
  return out;
}

template <typename T>
DirectionPair<T> filter_normalized_directions(const ParamSet<T>& params, std::uint64_t seed) {
  Rng rng = make_rng(seed, "directions");
  std::normal_distribution<double> normal(0.0, 1.0);
  DirectionPair<T> out;
  out.seed = seed;
  for (ParamSet<T>* target : {&out.d1, &out.d2}) {
    for (const auto& t : params) {
      Matrix<double> dir(t.value.rows(), t.value.cols());
      for (double& v : dir.values()) v = normal(rng);
      rescale_like(dir, t.value.template cast<double>(), is_bias(t.dims));
      target->add(t.name, t.dims, dir.template cast<T>());
    }
  }
  return out;
}

std::vector<double> grid_axis(const GridSpec& spec) {
  if (spec.steps < 3 || spec.steps % 2 == 0) throw ConfigError("grid steps must be odd and >= 3");
  if (!(spec.half_range > 0.0) || !std::isfinite(spec.half_range)) {
    throw ConfigError("grid half_range must be a finite value > 0");
  }
  const std::size_t mid = spec.steps / 2;
  std::vector<double> axis(spec.steps);
  for (std::size_t i = 0; i < spec.steps; ++i) {
    axis[i] = spec.half_range * (static_cast<double>(i) - static_cast<double>(mid)) /
              static_cast<double>(mid);
  }
  return axis;
}

template <typename T>
ParamSet<T> perturb(const ParamSet<T>& params, const DirectionPair<T>& dirs, double alpha, double beta) {
  ParamSet<T> p = params;
  if (alpha != 0.0) p.axpy(static_cast<T>(alpha), dirs.d1);
  if (beta != 0.0) p.axpy(static_cast<T>(beta), dirs.d2);
  return p;
}

template <typename T>
LandscapeGrid loss_grid(const Evaluator<T>& evaluator, const ParamSet<T>& params,
                        const DirectionPair<T>& dirs, const GridSpec& spec) {
  LandscapeGrid g;
  g.alphas = grid_axis(spec);
  g.betas = g.alphas;
  g.direction_seed = dirs.seed;
  g.losses = Matrix<double>(g.alphas.size(), g.betas.size());
  auto eval = [&](const ParamSet<T>& p) {
    try {
      const double l = evaluator.loss(p);
      return std::isfinite(l) ? l : std::numeric_limits<double>::infinity();
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  g.base_loss = eval(params);
  for (std::size_t i = 0; i < g.alphas.size(); ++i) {
    for (std::size_t j = 0; j < g.betas.size(); ++j) {
      g.losses(i, j) = eval(perturb(params, dirs, g.alphas[i], g.betas[j]));
    }
  }
  return g;
}

double low_loss_fraction(const LandscapeGrid& grid, double delta) {
  if (grid.losses.empty()) return 0.0;
  std::size_t low = 0;
  for (double l : grid.losses.values()) low += l <= grid.base_loss + delta ? 1 : 0;
  return static_cast<double>(low) / static_cast<double>(grid.losses.size());
}

Trajectory pca_project(const std::vector<std::vector<double>>& snapshots) {
  const std::size_t n = snapshots.size();
  if (n < 3) throw ConfigError("pca_project needs at least 3 snapshots");
  const std::size_t p = snapshots.front().size();
  for (const auto& s : snapshots) {
    if (s.size() != p) throw ShapeError("pca_project: snapshots differ in size");
  }
  Eigen::MatrixXd x(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < p; ++k) x(i, k) = snapshots[i][k];
  }
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd gram = x * x.transpose();
  const double total = gram.trace();
  if (!(total > 0.0)) throw DegenerateError("pca_project: snapshots have zero variance");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericError("pca_project: eigendecomposition failed");
  Trajectory t;
  t.coords = Matrix<double>(n, 2);
  for (int k = 0; k < 2; ++k) {
    const Eigen::Index col = static_cast<Eigen::Index>(n) - 1 - k;  // ascending order
    const double lambda = std::max(eig.eigenvalues()(col), 0.0);
    Eigen::VectorXd u = eig.eigenvectors().col(col);
    Eigen::Index arg = 0;
    u.cwiseAbs().maxCoeff(&arg);
    if (u(arg) < 0.0) u = -u;
    const double scale = std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i) t.coords(i, static_cast<std::size_t>(k)) = scale * u(static_cast<Eigen::Index>(i));
    t.explained_variance.push_back(lambda / total);
  }
  t.epochs.resize(n);
  t.phases.assign(n, "");
  for (std::size_t i = 0; i < n; ++i) t.epochs[i] = i;
  return t;
}

template <typename T>
Trajectory pca_project(const std::vector<ParamSet<T>>& snapshots) {
  std::vector<std::vector<double>> flat;
  flat.reserve(snapshots.size());
  for (const auto& s : snapshots) flat.push_back(s.flatten());
  return pca_project(flat);
}

template <typename T>
std::vector<std::size_t> weight_histogram(const ParamSet<T>& params, std::size_t bins, double lo,
                                          double hi, bool include_bias) {
  if (bins < 1) throw ConfigError("histogram needs at least one bin");
  if (!(hi > lo)) throw ConfigError("histogram range must satisfy lo < hi");
  std::vector<std::size_t> counts(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (const auto& t : params) {
    if (is_bias(t.dims) && !include_bias) continue;
    for (T v : t.value.values()) {
      const double pos = std::floor((static_cast<double>(v) - lo) / width);
      std::size_t b = 0;
      if (pos >= static_cast<double>(bins)) {
        b = bins - 1;
      } else if (pos > 0.0) {
        b = static_cast<std::size_t>(pos);
      }
      ++counts[b];
    }
  }
  return counts;
}

void write_landscape(std::ostream& out, const LandscapeGrid& grid) {
  out << "# direction_seed=" << grid.direction_seed << " base_loss=" << fmt6(grid.base_loss) << '\n';
  out << "alpha,beta,loss\n";
  for (std::size_t i = 0; i < grid.alphas.size(); ++i) {
    for (std::size_t j = 0; j < grid.betas.size(); ++j) {
      out << fmt6(grid.alphas[i]) << ',' << fmt6(grid.betas[j]) << ',' << fmt6(grid.losses(i, j)) << '\n';
    }
  }
}

void write_trajectory(std::ostream& out, const Trajectory& t) {
  out << "epoch,phase,x,y\n";
  for (std::size_t i = 0; i < t.epochs.size(); ++i) {
    out << t.epochs[i] << ',' << t.phases[i] << ',' << fmt6(t.coords(i, 0)) << ','
        << fmt6(t.coords(i, 1)) << '\n';
  }
}

void write_histogram(std::ostream& out, const std::vector<std::size_t>& counts, double lo, double hi) {
  out << "bin_left,bin_right,count\n";
  const double width = (hi - lo) / static_cast<double>(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    out << fmt6(lo + width * static_cast<double>(b)) << ',' << fmt6(lo + width * static_cast<double>(b + 1))
        << ',' << counts[b] << '\n';
  }
}

#define MLPINIT_INSTANTIATE(T)                                                                    \
  template std::vector<double> filter_norms(const NamedTensor<T>&);                               \
  template DirectionPair<T> filter_normalized_directions(const ParamSet<T>&, std::uint64_t);      \
  template ParamSet<T> perturb(const ParamSet<T>&, const DirectionPair<T>&, double, double);      \
  template LandscapeGrid loss_grid(const Evaluator<T>&, const ParamSet<T>&, const DirectionPair<T>&, \
                                   const GridSpec&);                                              \
  template Trajectory pca_project(const std::vector<ParamSet<T>>&);                               \
  template std::vector<std::size_t> weight_histogram(const ParamSet<T>&, std::size_t, double,    \
                                                     double, bool);
MLPINIT_INSTANTIATE(float)
MLPINIT_INSTANTIATE(double)
#undef MLPINIT_INSTANTIATE

}  // namespace mlpinit
