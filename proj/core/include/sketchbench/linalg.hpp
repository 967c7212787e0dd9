#pragma once

#include <span>
#include <vector>

#include "sketchbench/row_matrix.hpp"
#include "sketchbench/types.hpp"

namespace sketchbench::linalg {

// Singular values below this fraction of the largest are reported as exactly zero.
inline constexpr double kClampRelative = 1e-12;

struct SingularSpectrum {
  std::vector<double> values;  // non-increasing, length r = min(rows, cols)
  Matrix right_basis;          // r x d, orthonormal rows

  Index rank() const;
};

struct SvdResult {
  SingularSpectrum spectrum;
  Matrix left;  // rows x r with orthonormal columns; empty unless requested
};

// Thin SVD, M = left * diag(values) * right_basis. Deterministic for fixed input.
// Directions of zero singular values are completed to an orthonormal set.
SvdResult svd(const Matrix& m, bool want_left = false);
std::vector<double> singular_values(const Matrix& m);

// Largest absolute eigenvalue of a symmetric matrix.
double spectral_norm(const Matrix& sym);

// Lanczos iteration alone, without validation or the small-d eigensolver route.
double spectral_norm_krylov(const Matrix& sym);

double frobenius_sq(const Matrix& m);

// sum_{j > k} values[j]^2 (values indexed from 1).
double tail_sum_sq(std::span<const double> values, Index k);

// ||A - A_k||_F^2
double rank_k_residual_sq(const RowMatrix& a, Index k);
double rank_k_residual_sq(const Matrix& a, Index k);

// A^T A, symmetric.
Matrix gram(const RowMatrix& a);

class RankKProjection {
 public:
  // basis: k x d with orthonormal rows (checked to 1e-8).
  explicit RankKProjection(Matrix basis);

  // Top-k right singular vectors of x; fewer rows when rank(x) < k.
  static RankKProjection top_k(const Matrix& x, Index k);

  Index k() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

 private:
  Matrix basis_;
};

Matrix project_onto(const Matrix& a, const RankKProjection& p);
RowMatrix project_onto(const RowMatrix& a, const RankKProjection& p);

}  // namespace sketchbench::linalg
