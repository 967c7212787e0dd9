#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sketchbench/row_matrix.hpp"
#include "sketchbench/types.hpp"

namespace sketchbench::metrics {

// Thrown by proj_err when ||A - A_k||_F = 0: A is exactly rank <= k.
class ExactApproximation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ProjErr {
  double value = 0.0;
  bool rank_deficient = false;  // rank(B) < k; all of B's row space was used
};

// ||A^T A - B^T B||_2 / ||A||_F^2
double cov_err(const RowMatrix& a, const Matrix& b);
double cov_err(const RowMatrix& a, const RowMatrix& b);

// ||A - pi_{B_k}(A)||_F^2 / ||A - A_k||_F^2, projecting onto B's top-k right singular vectors.
ProjErr proj_err(const RowMatrix& a, const Matrix& b, Index k = 10);
ProjErr proj_err(const RowMatrix& a, const RowMatrix& b, Index k = 10);

// Caches A^T A, ||A||_F^2 and the spectrum of A for repeated evaluation.
class Evaluator {
 public:
  explicit Evaluator(const RowMatrix& a, bool with_spectrum = true);

  double cov_err(const Matrix& b) const;
  ProjErr proj_err(const Matrix& b, Index k) const;

  // ||A - A_k||_F^2
  double optimal_tail(Index k) const;
  double frobenius_sq() const { return frob_; }
  const Matrix& gram() const { return gram_; }
  const std::vector<double>& singular_values() const;

 private:
  Matrix a_;
  Matrix gram_;
  double frob_ = 0.0;
  bool with_spectrum_ = false;
  std::vector<double> sigma_;
};

struct ErrorReport {
  std::string algorithm;
  Index ell = 0;
  Index trial = 0;
  std::uint64_t seed = 0;
  std::optional<double> cov_err;
  std::optional<double> proj_err;
  bool proj_exact = false;
  bool proj_rank_deficient = false;
  std::optional<std::int64_t> wall_ns;
  bool streaming = true;
};

}  // namespace sketchbench::metrics
