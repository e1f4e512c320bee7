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

#include <filesystem>
#include <string>

#include "mlpinit/graph.hpp"

namespace mlpinit {

// On-disk dataset layout:
//   edges     text, one "u v" pair per line (0-based), no comments
//   features  binary "MLPI" v1 (u32 LE version, N, D, then f32 LE row-major),
//             or text with N comma-separated rows of D values
//   labels    text, one integer per line
//   splits    JSON {"train": [...], "val": [...], "test": [...]}
struct DatasetPaths {
  std::filesystem::path edges;
  std::filesystem::path features;
  std::filesystem::path labels;
  std::filesystem::path splits;

  /// Canonical file names inside a dataset directory.
  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

Graph load_graph(const DatasetPaths& paths);

/// Writes the four dataset files. Features are stored in the binary format,
/// so values are narrowed to 32-bit floats.
void write_graph(const Graph& graph, const DatasetPaths& paths);

Matrix<double> read_features(const std::filesystem::path& path);
void write_features_binary(const Matrix<double>& features, const std::filesystem::path& path);

}  // namespace mlpinit
