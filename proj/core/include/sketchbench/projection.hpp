#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sketchbench/row_matrix.hpp"
#include "sketchbench/types.hpp"

namespace sketchbench::projection {

enum class Kind { sign, hash, osnap };

struct Bucket {
  Index index;
  double sign;
};

// Seeded hash of (row_index, block) into [0, buckets) with a random sign.
Bucket hash_bucket(std::uint64_t seed, std::uint64_t row_index, std::uint64_t block, Index buckets);

// Sign of S(j, row_index) for the dense sign projection, before the 1/sqrt(ell) scaling.
double sign_entry(std::uint64_t seed, std::uint64_t row_index, Index j);

// Streaming linear sketch B = S A, one input row at a time.
class ProjectionSketch {
 public:
  static ProjectionSketch sign(Index ell, Index dim, std::uint64_t seed);
  static ProjectionSketch hash(Index ell, Index dim, std::uint64_t seed);
  // ell is rounded up to a multiple of s.
  static ProjectionSketch osnap(Index ell, Index dim, Index s, std::uint64_t seed);

  void update(const RowView& row);
  void update(const RowView& row, std::uint64_t row_index);

  Matrix finalize() const { return accum_; }
  const Matrix& accum() const { return accum_; }

  Kind kind() const { return kind_; }
  Index ell() const { return accum_.rows(); }
  Index dim() const { return accum_.cols(); }
  Index blocks() const { return blocks_; }
  Index rows_seen() const { return rows_seen_; }

 private:
  ProjectionSketch(Kind kind, Index ell, Index dim, Index blocks, std::uint64_t seed);

  Kind kind_;
  Index blocks_;
  std::uint64_t seed_;
  Matrix accum_;
  Index rows_seen_ = 0;
  std::vector<double> signs_;
};

Index next_pow2(Index n);

// q = min(1, (log2 n)^2 / d)
double default_fjlt_density(Index n, Index d);

// Unnormalized Walsh-Hadamard transform along the rows of x (rows must be a power of two).
void fwht(Matrix& x);

// B = P (H / sqrt(N)) D A with A zero-padded to N = next_pow2(n) rows.
struct FjltOperator {
  Index n = 0;
  Index padded = 0;
  Index ell = 0;
  double q = 1.0;
  std::vector<double> signs;  // diagonal of D, length padded
  std::optional<Matrix> p;    // explicit ell x padded P; otherwise drawn from p_seed
  std::uint64_t p_seed = 0;
};

FjltOperator make_fjlt(Index n, Index d, Index ell, std::uint64_t seed, std::optional<double> q = {});
Matrix apply_fjlt(const FjltOperator& op, const RowMatrix& a);
Matrix fjlt_sketch(const RowMatrix& a, Index ell, std::uint64_t seed, std::optional<double> q = {});

}  // namespace sketchbench::projection
