#include "sketchbench/row_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sketchbench {

RowView RowView::dense(std::span<const double> values) {
  RowView v;
  v.dim_ = static_cast<Index>(values.size());
  v.values_ = values;
  return v;
}

RowView RowView::sparse(Index dim, std::span<const std::int32_t> indices,
                        std::span<const double> values) {
  if (indices.size() != values.size()) {
    throw std::invalid_argument("sparse row: index and value counts differ");
  }
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= dim || (k > 0 && indices[k] <= indices[k - 1])) {
      throw std::invalid_argument("sparse row: indices must be strictly increasing in [0, d)");
    }
  }
  RowView v;
  v.dim_ = dim;
  v.sparse_ = true;
  v.indices_ = indices;
  v.values_ = values;
  return v;
}

double RowView::squared_norm() const {
  double s = 0.0;
  for (double x : values_) s += x * x;
  return s;
}

bool RowView::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

bool RowView::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

void RowView::add_to(double* dst, double scale) const {
  if (sparse_) {
    for (std::size_t k = 0; k < values_.size(); ++k) dst[indices_[k]] += scale * values_[k];
  } else {
    Eigen::Map<Vector>(dst, dim_) += scale * Eigen::Map<const Vector>(values_.data(), dim_);
  }
}

void RowView::copy_to(double* dst) const {
  if (sparse_) {
    std::fill(dst, dst + dim_, 0.0);
    for (std::size_t k = 0; k < values_.size(); ++k) dst[indices_[k]] = values_[k];
  } else {
    std::copy(values_.begin(), values_.end(), dst);
  }
}

Vector RowView::to_dense() const {
  Vector v(dim_);
  copy_to(v.data());
  return v;
}

RowMatrix RowMatrix::from_dense(Matrix m) {
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  RowMatrix a;
  a.rows_ = m.rows();
  a.cols_ = m.cols();
  a.storage_ = Storage::dense;
  a.dense_ = std::move(m);
  return a;
}

RowMatrix RowMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> entries) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimensions");
  std::sort(entries.begin(), entries.end(), [](const Triplet& x, const Triplet& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<std::int32_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Triplet& t = entries[k];
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::invalid_argument("entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                  ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
      throw std::invalid_argument("duplicate entry (" + std::to_string(t.row) + ", " +
                                  std::to_string(t.col) + ")");
    }
    ++row_ptr[static_cast<std::size_t>(t.row) + 1];
    col_idx.push_back(static_cast<std::int32_t>(t.col));
    values.push_back(t.value);
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(rows); ++i) row_ptr[i + 1] += row_ptr[i];
  return from_csr(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

RowMatrix RowMatrix::from_csr(Index rows, Index cols, std::vector<std::int64_t> row_ptr,
                              std::vector<std::int32_t> col_idx, std::vector<double> values) {
  if (row_ptr.size() != static_cast<std::size_t>(rows) + 1 || row_ptr.front() != 0 ||
      static_cast<std::size_t>(row_ptr.back()) != col_idx.size() || col_idx.size() != values.size()) {
    throw std::invalid_argument("inconsistent CSR arrays");
  }
  for (Index i = 0; i < rows; ++i) {
    if (row_ptr[i + 1] < row_ptr[i]) throw std::invalid_argument("CSR row pointers decrease");
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (col_idx[k] < 0 || col_idx[k] >= cols || (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1])) {
        throw std::invalid_argument("row " + std::to_string(i) +
                                    ": column indices must be strictly increasing in [0, d)");
      }
      if (!std::isfinite(values[k])) {
        throw std::invalid_argument("row " + std::to_string(i) + ": non-finite entry");
      }
    }
  }
  RowMatrix a;
  a.rows_ = rows;
  a.cols_ = cols;
  a.storage_ = Storage::sparse;
  a.row_ptr_ = std::move(row_ptr);
  a.col_idx_ = std::move(col_idx);
  a.values_ = std::move(values);
  return a;
}

RowView RowMatrix::row(Index i) const {
  if (i < 0 || i >= rows_) throw std::out_of_range("row index " + std::to_string(i));
  if (storage_ == Storage::dense) {
    return RowView::dense({dense_.row(i).data(), static_cast<std::size_t>(cols_)});
  }
  auto b = static_cast<std::size_t>(row_ptr_[i]);
  auto e = static_cast<std::size_t>(row_ptr_[i + 1]);
  RowView v;
  v.dim_ = cols_;
  v.sparse_ = true;
  v.indices_ = {col_idx_.data() + b, e - b};
  v.values_ = {values_.data() + b, e - b};
  return v;
}

Index RowMatrix::nnz() const {
  if (storage_ == Storage::sparse) {
    return static_cast<Index>(std::count_if(values_.begin(), values_.end(),
                                            [](double x) { return x != 0.0; }));
  }
  return static_cast<Index>((dense_.array() != 0.0).count());
}

double RowMatrix::frobenius_sq() const {
  if (storage_ == Storage::dense) return dense_.squaredNorm();
  double s = 0.0;
  for (double x : values_) s += x * x;
  return s;
}

Matrix RowMatrix::to_dense() const {
  if (storage_ == Storage::dense) return dense_;
  Matrix m = Matrix::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) m(i, col_idx_[k]) = values_[k];
  }
  return m;
}

const Matrix& RowMatrix::dense() const {
  if (storage_ != Storage::dense) throw std::logic_error("RowMatrix::dense on sparse storage");
  return dense_;
}

}  // namespace sketchbench
