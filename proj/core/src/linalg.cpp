#include "sketchbench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sketchbench/random.hpp"

namespace sketchbench::linalg {
namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

// One-sided Jacobi on the rows of w until they are mutually orthogonal.
// Rotations are mirrored on the columns of u when given.
void orthogonalize_rows(Matrix& w, Matrix* u) {
  const Index r = w.rows();
  const double tol = std::sqrt(static_cast<double>(std::max<Index>(w.cols(), 1))) *
                     std::numeric_limits<double>::epsilon();
  std::vector<double> norms(static_cast<std::size_t>(r));
  for (int sweep = 0; sweep < 60; ++sweep) {
    for (Index i = 0; i < r; ++i) norms[i] = w.row(i).squaredNorm();
    bool rotated = false;
    for (Index i = 0; i < r; ++i) {
      for (Index j = i + 1; j < r; ++j) {
        const double a = norms[i];
        const double b = norms[j];
        if (a == 0.0 || b == 0.0) continue;
        const double g = w.row(i).dot(w.row(j));
        if (std::abs(g) <= tol * std::sqrt(a * b)) continue;
        rotated = true;
        const double zeta = (b - a) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Index k = 0; k < w.cols(); ++k) {
          const double wi = w(i, k);
          const double wj = w(j, k);
          w(i, k) = c * wi - s * wj;
          w(j, k) = s * wi + c * wj;
        }
        if (u != nullptr) {
          for (Index k = 0; k < u->rows(); ++k) {
            const double ui = (*u)(k, i);
            const double uj = (*u)(k, j);
            (*u)(k, i) = c * ui - s * uj;
            (*u)(k, j) = s * ui + c * uj;
          }
        }
        norms[i] = w.row(i).squaredNorm();
        norms[j] = w.row(j).squaredNorm();
      }
    }
    if (!rotated) break;
  }
}

// Rows [filled, rows) of basis become an orthonormal complement of rows [0, filled).
void complete_rows(Matrix& basis, Index filled) {
  const Index total = basis.rows();
  const Index d = basis.cols();
  if (filled >= total) return;
  Matrix q;
  if (filled == 0) {
    q = Matrix::Identity(d, d);
  } else {
    Eigen::MatrixXd span = basis.topRows(filled).transpose();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(d, total);
  }
  for (Index j = filled; j < total; ++j) basis.row(j) = q.col(j).transpose();
}

struct ShortSide {
  std::vector<double> sigma;
  Matrix rows;      // r x len, row j = sigma_j * (unit vector)
  Matrix rotation;  // r x r orthogonal, m = rotation * rows
};

// SVD along the short side of a wide matrix m (r x len, r <= len).
ShortSide wide_decompose(const Matrix& m, bool want_rotation) {
  const Index r = m.rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(r, r);
  g.selfadjointView<Eigen::Lower>().rankUpdate(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.selfadjointView<Eigen::Lower>());
  if (es.info() != Eigen::Success) throw std::runtime_error("svd: eigensolver failed");
  ShortSide out;
  out.rotation = es.eigenvectors().rowwise().reverse();
  out.rows = out.rotation.transpose() * m;
  orthogonalize_rows(out.rows, want_rotation ? &out.rotation : nullptr);
  out.sigma.resize(static_cast<std::size_t>(r));
  for (Index j = 0; j < r; ++j) out.sigma[j] = out.rows.row(j).norm();
  return out;
}

std::vector<Index> descending_order(const std::vector<double>& v) {
  std::vector<Index> order(v.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v[a] > v[b]; });
  return order;
}

void clamp_small(std::vector<double>& values) {
  if (values.empty()) return;
  const double cut = kClampRelative * values.front();
  for (double& v : values) {
    if (v < cut) v = 0.0;
  }
}

}  // namespace

Index SingularSpectrum::rank() const {
  return static_cast<Index>(std::count_if(values.begin(), values.end(), [](double v) { return v > 0.0; }));
}

SvdResult svd(const Matrix& m, bool want_left) {
  if (m.rows() < 1 || m.cols() < 1) throw std::invalid_argument("svd: empty matrix");
  require_finite(m, "svd");
  const bool wide = m.rows() <= m.cols();
  const Index r = std::min(m.rows(), m.cols());

  ShortSide side = wide ? wide_decompose(m, want_left) : wide_decompose(m.transpose(), true);
  const std::vector<Index> order = descending_order(side.sigma);

  SvdResult out;
  auto& values = out.spectrum.values;
  values.resize(static_cast<std::size_t>(r));
  for (Index j = 0; j < r; ++j) values[j] = side.sigma[order[j]];
  clamp_small(values);
  const Index rank = out.spectrum.rank();

  // Unit vectors along the long side, taken from the orthogonalized rows.
  Matrix long_side(r, wide ? m.cols() : m.rows());
  for (Index j = 0; j < rank; ++j) long_side.row(j) = side.rows.row(order[j]) / side.sigma[order[j]];
  const bool need_long = wide || want_left;
  if (need_long) complete_rows(long_side, rank);

  // Columns of the rotation, permuted, give the short-side vectors.
  Matrix short_side;
  if (!wide || want_left) {
    short_side.resize(r, r);
    for (Index j = 0; j < r; ++j) short_side.row(j) = side.rotation.col(order[j]).transpose();
  }

  if (wide) {
    out.spectrum.right_basis = std::move(long_side);
    if (want_left) out.left = short_side.transpose();
  } else {
    out.spectrum.right_basis = std::move(short_side);
    if (want_left) out.left = long_side.transpose();
  }
  return out;
}

std::vector<double> singular_values(const Matrix& m) {
  if (m.rows() < 1 || m.cols() < 1) throw std::invalid_argument("svd: empty matrix");
  require_finite(m, "svd");
  ShortSide side = m.rows() <= m.cols() ? wide_decompose(m, false) : wide_decompose(m.transpose(), false);
  std::vector<double> values = side.sigma;
  std::sort(values.begin(), values.end(), std::greater<>());
  clamp_small(values);
  return values;
}

double spectral_norm_krylov(const Matrix& sym) {
  const Index d = sym.rows();
  if (d == 0) return 0.0;
  Vector x = Vector::Ones(d);
  Rng rng = make_rng(0x5eed);
  for (Index i = 0; i < d; ++i) x(i) += 1e-3 * (uniform_open01(rng) - 0.5);
  x.normalize();
  Matrix basis(d, std::min<Index>(d, 1000));
  std::vector<double> alpha, beta;
  double estimate = 0.0;
  for (Index m = 0; m < basis.cols(); ++m) {
    basis.col(m) = x;
    Vector w = sym * x;
    alpha.push_back(x.dot(w));
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(m + 1) * (basis.leftCols(m + 1).transpose() * w);
    }
    const double b = w.norm();
    const auto size = static_cast<Index>(alpha.size());
    Matrix t = Matrix::Zero(size, size);
    for (Index i = 0; i < size; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < size) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral_norm: tridiagonal eigensolver failed");
    const Index top = std::abs(es.eigenvalues()(0)) > std::abs(es.eigenvalues()(size - 1)) ? 0 : size - 1;
    estimate = std::abs(es.eigenvalues()(top));
    const double residual = b * std::abs(es.eigenvectors()(size - 1, top));
    if (residual <= 1e-10 * estimate || b <= 1e-14 * std::max(estimate, 1e-300)) break;
    beta.push_back(b);
    x = w / b;
  }
  return estimate;
}

double spectral_norm(const Matrix& sym) {
  if (sym.rows() != sym.cols()) throw std::invalid_argument("spectral_norm: matrix is not square");
  if (sym.rows() == 0) return 0.0;
  require_finite(sym, "spectral_norm");
  const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  if ((sym - sym.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("spectral_norm: matrix is not symmetric");
  }
  const Index d = sym.rows();
  if (d <= 64) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(sym), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral_norm: eigensolver failed");
    return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(d - 1)));
  }
  return spectral_norm_krylov(sym);
}

double frobenius_sq(const Matrix& m) { return m.squaredNorm(); }

double tail_sum_sq(std::span<const double> values, Index k) {
  double s = 0.0;
  for (std::size_t j = static_cast<std::size_t>(std::max<Index>(k, 0)); j < values.size(); ++j) {
    s += values[j] * values[j];
  }
  return s;
}

double rank_k_residual_sq(const Matrix& a, Index k) {
  if (k < 0 || k > std::min(a.rows(), a.cols())) {
    throw std::invalid_argument("rank_k_residual_sq: k=" + std::to_string(k) + " outside [0, min(n,d)]");
  }
  if (k == 0) return a.squaredNorm();
  const std::vector<double> values = singular_values(a);
  return tail_sum_sq(values, k);
}

double rank_k_residual_sq(const RowMatrix& a, Index k) {
  if (k == 0 && k <= std::min(a.rows(), a.cols())) return a.frobenius_sq();
  return rank_k_residual_sq(a.to_dense(), k);
}

Matrix gram(const RowMatrix& a) {
  const Index d = a.cols();
  Matrix g = Matrix::Zero(d, d);
  if (!a.is_sparse()) {
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(d, d);
    lower.selfadjointView<Eigen::Lower>().rankUpdate(a.dense().transpose());
    g = lower.selfadjointView<Eigen::Lower>();
    return g;
  }
  for (Index i = 0; i < a.rows(); ++i) {
    const RowView row = a.row(i);
    const auto idx = row.indices();
    const auto val = row.values();
    for (std::size_t p = 0; p < idx.size(); ++p) {
      for (std::size_t q = 0; q <= p; ++q) g(idx[p], idx[q]) += val[p] * val[q];
    }
  }
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

RankKProjection::RankKProjection(Matrix basis) : basis_(std::move(basis)) {
  require_finite(basis_, "RankKProjection");
  if (basis_.rows() > basis_.cols()) throw std::invalid_argument("RankKProjection: k exceeds d");
  const Matrix gram_rows = basis_ * basis_.transpose();
  const double err = (gram_rows - Matrix::Identity(basis_.rows(), basis_.rows())).cwiseAbs().maxCoeff();
  if (basis_.rows() > 0 && err > 1e-8) {
    throw std::invalid_argument("RankKProjection: basis rows are not orthonormal");
  }
}

RankKProjection RankKProjection::top_k(const Matrix& x, Index k) {
  if (k < 0) throw std::invalid_argument("RankKProjection::top_k: negative k");
  const SvdResult s = svd(x);
  const Index keep = std::min(k, s.spectrum.rank());
  return RankKProjection(s.spectrum.right_basis.topRows(keep));
}

Matrix project_onto(const Matrix& a, const RankKProjection& p) {
  if (a.cols() != p.dim()) {
    throw std::invalid_argument("project_onto: A has " + std::to_string(a.cols()) +
                                " columns, basis has " + std::to_string(p.dim()));
  }
  return (a * p.basis().transpose()) * p.basis();
}

RowMatrix project_onto(const RowMatrix& a, const RankKProjection& p) {
  return RowMatrix::from_dense(project_onto(a.to_dense(), p));
}

}  // namespace sketchbench::linalg
