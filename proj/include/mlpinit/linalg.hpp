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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "mlpinit/errors.hpp"

namespace mlpinit {

// Dense row-major matrix. T is float (runtime default) or double (gradient
// checks and oracles).
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<T>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  template <typename U>
  Matrix<U> cast() const {
    std::vector<U> out(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) out[i] = static_cast<U>(data_[i]);
    return Matrix<U>(rows_, cols_, std::move(out));
  }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Compressed sparse row matrix in canonical form: column indices strictly
// increasing within each row. The constructor enforces this.
template <typename T>
class CsrMatrix {
 public:
  CsrMatrix() : row_ptr_(1, 0) {}
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::uint32_t> col_idx, std::vector<T> values);

  /// Builds a canonical matrix from (row, col, value) entries in any order.
  /// Duplicate coordinates are merged keeping the first value.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                 std::vector<std::tuple<std::uint32_t, std::uint32_t, T>> entries);
  static CsrMatrix identity(std::size_t n);
  static CsrMatrix from_dense(const Matrix<T>& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  std::size_t degree(std::size_t r) const { return row_ptr_[r + 1] - row_ptr_[r]; }
  std::span<const std::uint32_t> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], degree(r)};
  }
  std::span<const T> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], degree(r)};
  }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::uint32_t>& col_idx() const { return col_idx_; }
  const std::vector<T>& values() const { return values_; }

  bool contains(std::size_t r, std::size_t c) const;
  bool is_symmetric() const;

  CsrMatrix transpose() const;
  Matrix<T> to_dense() const;

  template <typename U>
  CsrMatrix<U> cast() const {
    std::vector<U> v(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) v[i] = static_cast<U>(values_[i]);
    return CsrMatrix<U>(rows_, cols_, row_ptr_, col_idx_, std::move(v));
  }

  bool operator==(const CsrMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_idx_;
  std::vector<T> values_;
};

enum class AdjacencyMode { kRaw, kRowMean, kSymSelfLoop };

std::string_view to_string(AdjacencyMode mode);
AdjacencyMode parse_adjacency_mode(std::string_view name);

/// a[m×k] · b[k×n]. Each output row accumulates over k in increasing order.
template <typename T>
Matrix<T> dense_matmul(const Matrix<T>& a, const Matrix<T>& b);

/// aᵀ · b without materializing the transpose of a.
template <typename T>
Matrix<T> matmul_transpose_a(const Matrix<T>& a, const Matrix<T>& b);

/// a · bᵀ.
template <typename T>
Matrix<T> matmul_transpose_b(const Matrix<T>& a, const Matrix<T>& b);

/// s[m×k] · b[k×n] with per-row accumulation in column-index order.
template <typename T>
Matrix<T> spmm(const CsrMatrix<T>& s, const Matrix<T>& b);

template <typename T>
Matrix<T> transpose(const Matrix<T>& a);

/// raw: unchanged. row_mean: D⁻¹A, zero-degree rows stay zero.
/// sym_selfloop: D̂^(-1/2)(A+I)D̂^(-1/2) with D̂ the row sums of A+I.
template <typename T>
CsrMatrix<T> normalize_adjacency(const CsrMatrix<T>& a, AdjacencyMode mode);

template <typename T>
bool all_finite(const Matrix<T>& m);

template <typename T>
T max_abs_diff(const Matrix<T>& a, const Matrix<T>& b);

}  // namespace mlpinit
