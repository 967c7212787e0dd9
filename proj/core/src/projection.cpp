#include "sketchbench/projection.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "sketchbench/random.hpp"

namespace sketchbench::projection {
namespace {

void check_row(const RowView& row, Index dim) {
  if (row.dim() != dim) {
    throw std::invalid_argument("row has length " + std::to_string(row.dim()) + ", sketch expects " +
                                std::to_string(dim));
  }
  if (!row.all_finite()) throw std::invalid_argument("row has non-finite entries");
}

}  // namespace

Bucket hash_bucket(std::uint64_t seed, std::uint64_t row_index, std::uint64_t block, Index buckets) {
  const std::uint64_t x = mix_seed({seed, row_index, block});
  const auto index = static_cast<Index>((static_cast<unsigned __int128>(x) * static_cast<std::uint64_t>(buckets)) >> 64);
  const double sign = (splitmix64(x) >> 63) != 0 ? 1.0 : -1.0;
  return {index, sign};
}

double sign_entry(std::uint64_t seed, std::uint64_t row_index, Index j) {
  const std::uint64_t key = mix_seed({seed, row_index});
  const std::uint64_t word = splitmix64(key + static_cast<std::uint64_t>(j / 64));
  return ((word >> (j % 64)) & 1U) != 0 ? 1.0 : -1.0;
}

ProjectionSketch::ProjectionSketch(Kind kind, Index ell, Index dim, Index blocks, std::uint64_t seed)
    : kind_(kind), blocks_(blocks), seed_(seed) {
  if (ell < 1) throw std::invalid_argument("sketch size ell must be >= 1");
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  accum_ = Matrix::Zero(ell, dim);
  if (kind == Kind::sign) signs_.resize(static_cast<std::size_t>(ell));
}

ProjectionSketch ProjectionSketch::sign(Index ell, Index dim, std::uint64_t seed) {
  return ProjectionSketch(Kind::sign, ell, dim, 1, seed);
}

ProjectionSketch ProjectionSketch::hash(Index ell, Index dim, std::uint64_t seed) {
  return ProjectionSketch(Kind::hash, ell, dim, 1, seed);
}

ProjectionSketch ProjectionSketch::osnap(Index ell, Index dim, Index s, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("OSNAP needs s >= 1");
  if (ell < 1) throw std::invalid_argument("sketch size ell must be >= 1");
  const Index padded = (ell + s - 1) / s * s;
  return ProjectionSketch(Kind::osnap, padded, dim, s, seed);
}

void ProjectionSketch::update(const RowView& row) { update(row, static_cast<std::uint64_t>(rows_seen_)); }

void ProjectionSketch::update(const RowView& row, std::uint64_t row_index) {
  check_row(row, dim());
  ++rows_seen_;
  switch (kind_) {
    case Kind::sign: {
      const double scale = 1.0 / std::sqrt(static_cast<double>(ell()));
      const std::uint64_t key = mix_seed({seed_, row_index});
      std::uint64_t word = 0;
      for (Index j = 0; j < ell(); ++j) {
        if (j % 64 == 0) word = splitmix64(key + static_cast<std::uint64_t>(j / 64));
        signs_[j] = ((word >> (j % 64)) & 1U) != 0 ? scale : -scale;
      }
      if (row.is_sparse()) {
        row.for_each_nonzero([&](Index c, double v) {
          for (Index j = 0; j < ell(); ++j) accum_(j, c) += signs_[j] * v;
        });
      } else {
        for (Index j = 0; j < ell(); ++j) row.add_to(accum_.row(j).data(), signs_[j]);
      }
      break;
    }
    case Kind::hash:
    case Kind::osnap: {
      const Index width = ell() / blocks_;
      const double scale = 1.0 / std::sqrt(static_cast<double>(blocks_));
      for (Index b = 0; b < blocks_; ++b) {
        const Bucket h = hash_bucket(seed_, row_index, static_cast<std::uint64_t>(b), width);
        row.add_to(accum_.row(b * width + h.index).data(), h.sign * scale);
      }
      break;
    }
  }
}

Index next_pow2(Index n) {
  if (n < 1) throw std::invalid_argument("next_pow2 of a non-positive count");
  return static_cast<Index>(std::bit_ceil(static_cast<std::uint64_t>(n)));
}

double default_fjlt_density(Index n, Index d) {
  const double lg = std::log2(static_cast<double>(std::max<Index>(n, 2)));
  return std::min(1.0, lg * lg / static_cast<double>(d));
}

void fwht(Matrix& x) {
  const Index n = x.rows();
  if (n < 1 || (n & (n - 1)) != 0) throw std::invalid_argument("fwht needs a power-of-two row count");
  Vector tmp(x.cols());
  for (Index h = 1; h < n; h *= 2) {
    for (Index i = 0; i < n; i += 2 * h) {
      for (Index k = i; k < i + h; ++k) {
        tmp = x.row(k).transpose();
        x.row(k) += x.row(k + h);
        x.row(k + h) = tmp.transpose() - x.row(k + h);
      }
    }
  }
}

FjltOperator make_fjlt(Index n, Index d, Index ell, std::uint64_t seed, std::optional<double> q) {
  if (n < 1 || d < 1) throw std::invalid_argument("FJLT needs a non-empty input");
  if (ell < 1) throw std::invalid_argument("sketch size ell must be >= 1");
  if (ell > n) {
    throw std::invalid_argument("FJLT sketch size ell=" + std::to_string(ell) + " exceeds n=" + std::to_string(n));
  }
  FjltOperator op;
  op.n = n;
  op.padded = next_pow2(n);
  op.ell = ell;
  op.q = q.value_or(default_fjlt_density(n, d));
  if (!(op.q > 0.0 && op.q <= 1.0)) throw std::invalid_argument("FJLT density q must lie in (0, 1]");
  Rng rng = make_rng(mix_seed({seed, 0xd1a6}));
  op.signs.resize(static_cast<std::size_t>(op.padded));
  for (double& s : op.signs) s = (rng() >> 63) != 0 ? 1.0 : -1.0;
  op.p_seed = mix_seed({seed, 0x9});
  return op;
}

Matrix apply_fjlt(const FjltOperator& op, const RowMatrix& a) {
  if (a.rows() != op.n) {
    throw std::invalid_argument("FJLT operator built for n=" + std::to_string(op.n) + ", input has " +
                                std::to_string(a.rows()) + " rows");
  }
  if (static_cast<Index>(op.signs.size()) != op.padded) throw std::invalid_argument("FJLT sign vector has wrong length");
  Matrix y = Matrix::Zero(op.padded, a.cols());
  for (Index i = 0; i < a.rows(); ++i) a.row(i).add_to(y.row(i).data(), op.signs[i]);
  fwht(y);
  y /= std::sqrt(static_cast<double>(op.padded));

  if (op.p) {
    if (op.p->cols() != op.padded) throw std::invalid_argument("explicit P must have N columns");
    return *op.p * y;
  }
  Matrix b = Matrix::Zero(op.ell, a.cols());
  const double scale = 1.0 / std::sqrt(static_cast<double>(op.ell) * op.q);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index j = 0; j < op.ell; ++j) {
    Rng rng = make_rng(mix_seed({op.p_seed, static_cast<std::uint64_t>(j)}));
    if (op.q >= 1.0) {
      for (Index i = 0; i < op.padded; ++i) b.row(j) += (scale * normal(rng)) * y.row(i);
    } else {
      std::geometric_distribution<Index> gap(op.q);
      for (Index i = gap(rng); i < op.padded; i += 1 + gap(rng)) b.row(j) += (scale * normal(rng)) * y.row(i);
    }
  }
  return b;
}

Matrix fjlt_sketch(const RowMatrix& a, Index ell, std::uint64_t seed, std::optional<double> q) {
  return apply_fjlt(make_fjlt(a.rows(), a.cols(), ell, seed, q), a);
}

}  // namespace sketchbench::projection
