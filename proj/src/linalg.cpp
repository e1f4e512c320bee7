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

#include "mlpinit/linalg.hpp"

#include <cmath>

#include "mlpinit/parallel.hpp"

namespace mlpinit {

namespace {

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                     " does not match " + dims(rows, cols));
  }
}

template <typename T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
  return m;
}

template <typename T>
Matrix<T> Matrix<T>::from_rows(std::initializer_list<std::initializer_list<T>> rows) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<T> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("ragged initializer rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

template <typename T>
CsrMatrix<T>::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                        std::vector<std::uint32_t> col_idx, std::vector<T> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0) {
    throw StructuralError("row_ptr must have rows+1 entries starting at 0");
  }
  if (row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size()) {
    throw StructuralError("row_ptr[rows] must equal nnz and match values length");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r]) throw StructuralError("row_ptr is decreasing");
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] >= cols_) {
        throw StructuralError("column index " + std::to_string(col_idx_[k]) +
                              " out of range in row " + std::to_string(r));
      }
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
        throw StructuralError("row " + std::to_string(r) +
                              " is not canonical (columns must strictly increase)");
      }
    }
  }
}

template <typename T>
CsrMatrix<T> CsrMatrix<T>::from_triplets(
    std::size_t rows, std::size_t cols,
    std::vector<std::tuple<std::uint32_t, std::uint32_t, T>> entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<std::uint32_t> col_idx;
  std::vector<T> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto [r, c, v] = entries[i];
    if (r >= rows || c >= cols) {
      throw RangeError("entry (" + std::to_string(r) + ", " + std::to_string(c) +
                       ") outside " + dims(rows, cols));
    }
    if (i > 0 && std::get<0>(entries[i - 1]) == r && std::get<1>(entries[i - 1]) == c) continue;
    col_idx.push_back(c);
    values.push_back(v);
    ++row_ptr[r + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <typename T>
CsrMatrix<T> CsrMatrix<T>::identity(std::size_t n) {
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<std::uint32_t> col_idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    row_ptr[i + 1] = i + 1;
    col_idx[i] = static_cast<std::uint32_t>(i);
  }
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::vector<T>(n, T(1)));
}

template <typename T>
CsrMatrix<T> CsrMatrix<T>::from_dense(const Matrix<T>& dense) {
  std::vector<std::size_t> row_ptr(dense.rows() + 1, 0);
  std::vector<std::uint32_t> col_idx;
  std::vector<T> values;
  for (std::size_t r = 0; r < dense.rows(); ++r) {
    for (std::size_t c = 0; c < dense.cols(); ++c) {
      if (dense(r, c) != T(0)) {
        col_idx.push_back(static_cast<std::uint32_t>(c));
        values.push_back(dense(r, c));
      }
    }
    row_ptr[r + 1] = col_idx.size();
  }
  return CsrMatrix(dense.rows(), dense.cols(), std::move(row_ptr), std::move(col_idx),
                   std::move(values));
}

template <typename T>
bool CsrMatrix<T>::contains(std::size_t r, std::size_t c) const {
  auto cols = row_cols(r);
  return std::binary_search(cols.begin(), cols.end(), static_cast<std::uint32_t>(c));
}

template <typename T>
bool CsrMatrix<T>::is_symmetric() const {
  if (rows_ != cols_) return false;
  return transpose() == *this;
}

template <typename T>
CsrMatrix<T> CsrMatrix<T>::transpose() const {
  // Counting sort by column; rows are visited in order so each output row is
  // already canonical.
  std::vector<std::size_t> row_ptr(cols_ + 1, 0);
  for (auto c : col_idx_) ++row_ptr[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) row_ptr[c + 1] += row_ptr[c];
  std::vector<std::size_t> cursor(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<std::uint32_t> col_idx(nnz());
  std::vector<T> values(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      std::size_t dst = cursor[col_idx_[k]]++;
      col_idx[dst] = static_cast<std::uint32_t>(r);
      values[dst] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

template <typename T>
Matrix<T> CsrMatrix<T>::to_dense() const {
  Matrix<T> out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out(r, col_idx_[k]) = values_[k];
  }
  return out;
}

std::string_view to_string(AdjacencyMode mode) {
  switch (mode) {
    case AdjacencyMode::kRaw:
      return "raw";
    case AdjacencyMode::kRowMean:
      return "row_mean";
    case AdjacencyMode::kSymSelfLoop:
      return "sym_selfloop";
  }
  return "raw";
}

AdjacencyMode parse_adjacency_mode(std::string_view name) {
  if (name == "raw") return AdjacencyMode::kRaw;
  if (name == "row_mean") return AdjacencyMode::kRowMean;
  if (name == "sym_selfloop") return AdjacencyMode::kSymSelfLoop;
  throw ConfigError("unknown adjacency mode '" + std::string(name) + "'");
}

template <typename T>
Matrix<T> dense_matmul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("dense_matmul: " + dims(a.rows(), a.cols()) + " times " +
                     dims(b.rows(), b.cols()));
  }
  Matrix<T> out(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  parallel_for_rows(a.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      T* dst = out.row(i).data();
      const T* arow = a.row(i).data();
      for (std::size_t k = 0; k < inner; ++k) {
        const T s = arow[k];
        const T* brow = b.row(k).data();
        for (std::size_t j = 0; j < n; ++j) dst[j] += s * brow[j];
      }
    }
  });
  return out;
}

template <typename T>
Matrix<T> matmul_transpose_a(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("matmul_transpose_a: " + dims(a.rows(), a.cols()) + "^T times " +
                     dims(b.rows(), b.cols()));
  }
  Matrix<T> out(a.cols(), b.cols());
  const std::size_t n = b.cols();
  parallel_for_rows(a.cols(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const T* arow = a.row(i).data();
      const T* brow = b.row(i).data();
      for (std::size_t p = begin; p < end; ++p) {
        const T s = arow[p];
        if (s == T(0)) continue;
        T* dst = out.row(p).data();
        for (std::size_t j = 0; j < n; ++j) dst[j] += s * brow[j];
      }
    }
  });
  return out;
}

template <typename T>
Matrix<T> matmul_transpose_b(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_transpose_b: " + dims(a.rows(), a.cols()) + " times " +
                     dims(b.rows(), b.cols()) + "^T");
  }
  Matrix<T> out(a.rows(), b.rows());
  const std::size_t inner = a.cols();
  parallel_for_rows(a.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const T* arow = a.row(i).data();
      for (std::size_t j = 0; j < b.rows(); ++j) {
        const T* brow = b.row(j).data();
        T acc = T(0);
        for (std::size_t k = 0; k < inner; ++k) acc += arow[k] * brow[k];
        out(i, j) = acc;
      }
    }
  });
  return out;
}

template <typename T>
Matrix<T> spmm(const CsrMatrix<T>& s, const Matrix<T>& b) {
  if (s.cols() != b.rows()) {
    throw ShapeError("spmm: sparse " + dims(s.rows(), s.cols()) + " times " +
                     dims(b.rows(), b.cols()));
  }
  Matrix<T> out(s.rows(), b.cols());
  const std::size_t n = b.cols();
  parallel_for_rows(s.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      T* dst = out.row(r).data();
      auto cols = s.row_cols(r);
      auto vals = s.row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const T v = vals[k];
        const T* brow = b.row(cols[k]).data();
        for (std::size_t j = 0; j < n; ++j) dst[j] += v * brow[j];
      }
    }
  });
  return out;
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  }
  return out;
}

template <typename T>
CsrMatrix<T> normalize_adjacency(const CsrMatrix<T>& a, AdjacencyMode mode) {
  if (a.rows() != a.cols()) {
    throw ShapeError("normalize_adjacency: adjacency must be square, got " +
                     dims(a.rows(), a.cols()));
  }
  const std::size_t n = a.rows();
  switch (mode) {
    case AdjacencyMode::kRaw:
      return a;
    case AdjacencyMode::kRowMean: {
      std::vector<T> values(a.values());
      for (std::size_t r = 0; r < n; ++r) {
        T sum = T(0);
        for (T v : a.row_values(r)) sum += v;
        if (sum == T(0)) continue;
        for (std::size_t k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) values[k] /= sum;
      }
      return CsrMatrix<T>(n, n, a.row_ptr(), a.col_idx(), std::move(values));
    }
    case AdjacencyMode::kSymSelfLoop: {
      // Merge the diagonal into each row while keeping column order.
      std::vector<std::size_t> row_ptr(n + 1, 0);
      std::vector<std::uint32_t> col_idx;
      std::vector<T> values;
      col_idx.reserve(a.nnz() + n);
      values.reserve(a.nnz() + n);
      for (std::size_t r = 0; r < n; ++r) {
        auto cols = a.row_cols(r);
        auto vals = a.row_values(r);
        bool placed = false;
        for (std::size_t k = 0; k < cols.size(); ++k) {
          if (!placed && cols[k] >= r) {
            if (cols[k] == r) {
              col_idx.push_back(cols[k]);
              values.push_back(vals[k] + T(1));
              placed = true;
              continue;
            }
            col_idx.push_back(static_cast<std::uint32_t>(r));
            values.push_back(T(1));
            placed = true;
          }
          col_idx.push_back(cols[k]);
          values.push_back(vals[k]);
        }
        if (!placed) {
          col_idx.push_back(static_cast<std::uint32_t>(r));
          values.push_back(T(1));
        }
        row_ptr[r + 1] = col_idx.size();
      }
      std::vector<T> inv_sqrt(n);
      for (std::size_t r = 0; r < n; ++r) {
        T sum = T(0);
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) sum += values[k];
        inv_sqrt[r] = sum > T(0) ? T(1) / std::sqrt(sum) : T(0);
      }
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
          values[k] = inv_sqrt[r] * values[k] * inv_sqrt[col_idx[k]];
        }
      }
      return CsrMatrix<T>(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
    }
  }
  return a;
}

template <typename T>
bool all_finite(const Matrix<T>& m) {
  for (T v : m.values()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

template <typename T>
T max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_abs_diff: " + dims(a.rows(), a.cols()) + " vs " +
                     dims(b.rows(), b.cols()));
  }
  T worst = T(0);
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) worst = std::max(worst, std::abs(av[i] - bv[i]));
  return worst;
}

#define MLPINIT_INSTANTIATE(T)                                                        \
  template class Matrix<T>;                                                           \
  template class CsrMatrix<T>;                                                        \
  template Matrix<T> dense_matmul(const Matrix<T>&, const Matrix<T>&);                \
  template Matrix<T> matmul_transpose_a(const Matrix<T>&, const Matrix<T>&);          \
  template Matrix<T> matmul_transpose_b(const Matrix<T>&, const Matrix<T>&);          \
  template Matrix<T> spmm(const CsrMatrix<T>&, const Matrix<T>&);                     \
  template Matrix<T> transpose(const Matrix<T>&);                                     \
  template CsrMatrix<T> normalize_adjacency(const CsrMatrix<T>&, AdjacencyMode);      \
  template bool all_finite(const Matrix<T>&);                                         \
  template T max_abs_diff(const Matrix<T>&, const Matrix<T>&);

MLPINIT_INSTANTIATE(float)
MLPINIT_INSTANTIATE(double)

#undef MLPINIT_INSTANTIATE

}  // namespace mlpinit
