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

#include "mlpinit/model.hpp"

namespace mlpinit {

// Binary parameter file: "MLPW", u32 version (1), u32 tensor count, then per
// tensor u32 name length, UTF-8 name, u32 rank, u32 dims, f32 values; all
// little-endian. Double-precision sets are narrowed to f32 on write.
template <typename T>
std::string serialize_params(const ParamSet<T>& params);

template <typename T>
ParamSet<T> deserialize_params(const std::string& bytes);

template <typename T>
void save_params(const ParamSet<T>& params, const std::filesystem::path& path);

template <typename T>
ParamSet<T> load_params(const std::filesystem::path& path);

}  // namespace mlpinit
