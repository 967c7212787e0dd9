#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sketchbench/types.hpp"

namespace sketchbench {

enum class Storage { dense, sparse };

// Read-only view of one length-d row, dense or sparse (sorted unique indices).
class RowView {
 public:
  static RowView dense(std::span<const double> values);
  static RowView sparse(Index dim, std::span<const std::int32_t> indices,
                        std::span<const double> values);

  Index dim() const { return dim_; }
  bool is_sparse() const { return sparse_; }
  std::span<const double> values() const { return values_; }
  std::span<const std::int32_t> indices() const { return indices_; }
  Index stored() const { return static_cast<Index>(values_.size()); }

  double squared_norm() const;
  bool all_finite() const;
  bool is_zero() const;

  // dst[0..d) += scale * row
  void add_to(double* dst, double scale = 1.0) const;
  void copy_to(double* dst) const;
  Vector to_dense() const;

  template <class F>
  void for_each_nonzero(F&& f) const {
    if (sparse_) {
      for (std::size_t k = 0; k < values_.size(); ++k) f(static_cast<Index>(indices_[k]), values_[k]);
    } else {
      for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k] != 0.0) f(static_cast<Index>(k), values_[k]);
      }
    }
  }

 private:
  friend class RowMatrix;

  Index dim_ = 0;
  bool sparse_ = false;
  std::span<const double> values_;
  std::span<const std::int32_t> indices_;
};

struct Triplet {
  Index row;
  Index col;
  double value;
};

// An n x d matrix consumed as an ordered stream of rows.
class RowMatrix {
 public:
  RowMatrix() = default;

  static RowMatrix from_dense(Matrix m);
  // Triplets may arrive in any order; duplicate (row, col) pairs are rejected.
  static RowMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> entries);
  static RowMatrix from_csr(Index rows, Index cols, std::vector<std::int64_t> row_ptr,
                            std::vector<std::int32_t> col_idx, std::vector<double> values);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Storage storage() const { return storage_; }
  bool is_sparse() const { return storage_ == Storage::sparse; }

  RowView row(Index i) const;
  Index nnz() const;
  double frobenius_sq() const;

  Matrix to_dense() const;
  // Dense storage only.
  const Matrix& dense() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  Storage storage_ = Storage::dense;
  Matrix dense_;
  std::vector<std::int64_t> row_ptr_;
  std::vector<std::int32_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace sketchbench
