#pragma once

#include <span>
#include <vector>

#include "sketchbench/row_matrix.hpp"
#include "sketchbench/types.hpp"

namespace sketchbench::iterative {

enum class Variant { isvd, pfd, fast_pfd, ss, cfd };

struct Reduced {
  std::vector<double> values;
  double delta = 0.0;
};

// Number of trailing values shrunk by the parameterized rule: max(1, round(alpha * ell)).
Index pfd_shrink_count(Index ell, double alpha);

// Each rule takes the full length-ell spectrum, sorted non-increasing.
std::vector<double> reduce_rank_isvd(std::span<const double> sigma);
Reduced reduce_rank_pfd(std::span<const double> sigma, double alpha);
Reduced reduce_rank_fast_pfd(std::span<const double> sigma, double alpha);
Reduced reduce_rank_ss(std::span<const double> sigma);

// Buffered sketch: rows fill zero rows of an ell x d buffer; a full buffer is
// decomposed, its spectrum shrunk by the variant's rule, and rewritten as S'V^T.
class IterativeSketch {
 public:
  IterativeSketch(Variant variant, Index ell, Index dim, double alpha = 1.0);

  void update(const RowView& row);
  void update(std::span<const double> row) { update(RowView::dense(row)); }

  Matrix finalize() const;

  Variant variant() const { return variant_; }
  Index ell() const { return ell_; }
  Index dim() const { return dim_; }
  double alpha() const { return alpha_; }
  double delta_total() const { return delta_; }
  Index zero_rows() const { return ell_ - filled_; }
  Index reductions() const { return reductions_; }
  const Matrix& buffer() const { return buffer_; }

 private:
  void reduce();

  Variant variant_;
  Index ell_;
  Index dim_;
  double alpha_;
  Matrix buffer_;
  Index filled_ = 0;
  double delta_ = 0.0;
  Index reductions_ = 0;
};

}  // namespace sketchbench::iterative
