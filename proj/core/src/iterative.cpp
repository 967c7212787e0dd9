#include "sketchbench/iterative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sketchbench/linalg.hpp"

namespace sketchbench::iterative {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

void check_spectrum(std::span<const double> sigma, std::size_t min_len) {
  if (sigma.size() < min_len) {
    throw std::invalid_argument("spectrum must have at least " + std::to_string(min_len) + " values");
  }
}

}  // namespace

Index pfd_shrink_count(Index ell, double alpha) {
  check_alpha(alpha);
  return std::max<Index>(1, std::min<Index>(ell, std::lround(alpha * static_cast<double>(ell))));
}

std::vector<double> reduce_rank_isvd(std::span<const double> sigma) {
  check_spectrum(sigma, 1);
  std::vector<double> out(sigma.begin(), sigma.end());
  out.back() = 0.0;
  return out;
}

Reduced reduce_rank_pfd(std::span<const double> sigma, double alpha) {
  check_spectrum(sigma, 1);
  const Index ell = static_cast<Index>(sigma.size());
  const Index m = pfd_shrink_count(ell, alpha);
  Reduced out{std::vector<double>(sigma.begin(), sigma.end()), sigma.back() * sigma.back()};
  for (Index j = ell - m; j < ell; ++j) {
    out.values[j] = std::sqrt(std::max(0.0, sigma[j] * sigma[j] - out.delta));
  }
  out.values.back() = 0.0;
  return out;
}

Reduced reduce_rank_fast_pfd(std::span<const double> sigma, double alpha) {
  check_alpha(alpha);
  check_spectrum(sigma, 2);
  const Index ell = static_cast<Index>(sigma.size());
  const auto half = static_cast<Index>(std::ceil(alpha * static_cast<double>(ell) / 2.0));
  const Index t = ell - half;  // 1-based position
  if (t < 1) throw std::invalid_argument("fast rule needs ell - ceil(alpha*ell/2) >= 1");
  const Index m = std::min<Index>(ell, static_cast<Index>(std::ceil(alpha * static_cast<double>(ell))));
  Reduced out{std::vector<double>(sigma.begin(), sigma.end()), sigma[t - 1] * sigma[t - 1]};
  for (Index j = ell - m; j < ell; ++j) {
    out.values[j] = std::sqrt(std::max(0.0, sigma[j] * sigma[j] - out.delta));
  }
  return out;
}

Reduced reduce_rank_ss(std::span<const double> sigma) {
  check_spectrum(sigma, 2);
  const std::size_t ell = sigma.size();
  Reduced out{std::vector<double>(sigma.begin(), sigma.end()), sigma[ell - 2] * sigma[ell - 2]};
  out.values[ell - 2] = 0.0;
  out.values[ell - 1] = std::sqrt(sigma[ell - 1] * sigma[ell - 1] + out.delta);
  return out;
}

IterativeSketch::IterativeSketch(Variant variant, Index ell, Index dim, double alpha)
    : variant_(variant), ell_(ell), dim_(dim), alpha_(alpha) {
  if (ell < 2) throw std::invalid_argument("sketch size ell must be >= 2");
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  check_alpha(alpha);
  if (variant == Variant::cfd && alpha != 1.0) {
    throw std::invalid_argument("compensative FD requires alpha = 1");
  }
  if (variant == Variant::fast_pfd && ell - static_cast<Index>(std::ceil(alpha * ell / 2.0)) < 1) {
    throw std::invalid_argument("fast rule needs ell - ceil(alpha*ell/2) >= 1");
  }
  buffer_ = Matrix::Zero(ell, dim);
}

void IterativeSketch::update(const RowView& row) {
  if (row.dim() != dim_) {
    throw std::invalid_argument("row has length " + std::to_string(row.dim()) + ", sketch expects " +
                                std::to_string(dim_));
  }
  if (!row.all_finite()) throw std::invalid_argument("row has non-finite entries");
  if (row.is_zero()) return;
  row.copy_to(buffer_.row(filled_).data());
  ++filled_;
  if (filled_ == ell_) reduce();
}

void IterativeSketch::reduce() {
  const linalg::SvdResult s = linalg::svd(buffer_);
  const auto& values = s.spectrum.values;
  const auto& basis = s.spectrum.right_basis;
  const Index r = static_cast<Index>(values.size());

  std::vector<double> next;
  double delta = 0.0;
  if (ell_ > dim_) {
    // ell > d: rotate only.
    next = values;
  } else {
    switch (variant_) {
      case Variant::isvd:
        next = reduce_rank_isvd(values);
        delta = values.back() * values.back();
        break;
      case Variant::pfd:
      case Variant::cfd: {
        Reduced red = reduce_rank_pfd(values, alpha_);
        next = std::move(red.values);
        delta = red.delta;
        break;
      }
      case Variant::fast_pfd: {
        Reduced red = reduce_rank_fast_pfd(values, alpha_);
        next = std::move(red.values);
        delta = red.delta;
        break;
      }
      case Variant::ss: {
        Reduced red = reduce_rank_ss(values);
        next = std::move(red.values);
        delta = red.delta;
        break;
      }
    }
  }

  buffer_.setZero();
  filled_ = 0;
  for (Index j = 0; j < r; ++j) {
    if (next[j] > 0.0) buffer_.row(filled_++) = next[j] * basis.row(j);
  }
  delta_ += delta;
  ++reductions_;
}

Matrix IterativeSketch::finalize() const {
  if (variant_ != Variant::cfd || delta_ == 0.0) return buffer_;
  const linalg::SvdResult s = linalg::svd(buffer_);
  Matrix out = Matrix::Zero(ell_, dim_);
  const Index r = static_cast<Index>(s.spectrum.values.size());
  for (Index j = 0; j < r; ++j) {
    const double v = s.spectrum.values[j];
    out.row(j) = std::sqrt(v * v + delta_) * s.spectrum.right_basis.row(j);
  }
  return out;
}

}  // namespace sketchbench::iterative
