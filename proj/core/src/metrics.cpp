#include "sketchbench/metrics.hpp"

#include <string>

#include "sketchbench/linalg.hpp"

namespace sketchbench::metrics {
namespace {

void check_shapes(Index a_cols, const Matrix& b) {
  if (b.cols() != a_cols) {
    throw std::invalid_argument("sketch has " + std::to_string(b.cols()) + " columns, input has " +
                                std::to_string(a_cols));
  }
  if (!b.allFinite()) throw std::invalid_argument("sketch has non-finite entries");
}

Matrix sketch_gram(const Matrix& b) {
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(b.cols(), b.cols());
  if (b.rows() > 0) lower.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
  return lower.selfadjointView<Eigen::Lower>();
}

}  // namespace

Evaluator::Evaluator(const RowMatrix& a, bool with_spectrum)
    : a_(a.to_dense()), gram_(linalg::gram(a)), frob_(a.frobenius_sq()), with_spectrum_(with_spectrum) {
  if (!(frob_ > 0.0)) throw std::invalid_argument("error metrics undefined for a zero input matrix");
  if (with_spectrum_) sigma_ = linalg::singular_values(a_);
}

const std::vector<double>& Evaluator::singular_values() const {
  if (!with_spectrum_) throw std::logic_error("Evaluator built without the spectrum of A");
  return sigma_;
}

double Evaluator::cov_err(const Matrix& b) const {
  check_shapes(a_.cols(), b);
  Matrix diff = gram_ - sketch_gram(b);
  diff = 0.5 * (diff + diff.transpose()).eval();
  return linalg::spectral_norm(diff) / frob_;
}

double Evaluator::optimal_tail(Index k) const {
  if (k < 0) throw std::invalid_argument("proj_err: negative k");
  return linalg::tail_sum_sq(singular_values(), k);
}

ProjErr Evaluator::proj_err(const Matrix& b, Index k) const {
  check_shapes(a_.cols(), b);
  const double tail = optimal_tail(k);
  if (!(tail > 0.0)) {
    throw ExactApproximation("proj_err: ||A - A_k||_F = 0 for k=" + std::to_string(k) +
                             " (A has rank <= k)");
  }
  ProjErr out;
  Matrix residual = a_;
  if (b.rows() > 0 && b.squaredNorm() > 0.0) {
    const linalg::RankKProjection p = linalg::RankKProjection::top_k(b, k);
    out.rank_deficient = p.k() < k;
    residual -= linalg::project_onto(a_, p);
  } else {
    out.rank_deficient = k > 0;
  }
  out.value = residual.squaredNorm() / tail;
  return out;
}

double cov_err(const RowMatrix& a, const Matrix& b) { return Evaluator(a, false).cov_err(b); }

double cov_err(const RowMatrix& a, const RowMatrix& b) { return cov_err(a, b.to_dense()); }

ProjErr proj_err(const RowMatrix& a, const Matrix& b, Index k) { return Evaluator(a).proj_err(b, k); }

ProjErr proj_err(const RowMatrix& a, const RowMatrix& b, Index k) { return proj_err(a, b.to_dense(), k); }

}  // namespace sketchbench::metrics
