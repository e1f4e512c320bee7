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
#include <functional>

namespace mlpinit {

/// Worker count used by row-partitioned kernels. Read once from
/// MLPINIT_NUM_THREADS (default 1); set_num_threads overrides it.
int num_threads();
void set_num_threads(int n);

/// Calls body(begin, end) over contiguous chunks of [0, n). Each row is owned
/// by exactly one chunk, so per-row results never depend on the partition.
void parallel_for_rows(std::size_t n,
                       const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace mlpinit
