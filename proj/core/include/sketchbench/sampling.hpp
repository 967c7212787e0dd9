#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "sketchbench/random.hpp"
#include "sketchbench/row_matrix.hpp"
#include "sketchbench/types.hpp"

namespace sketchbench::sampling {

struct WeightedSample {
  std::shared_ptr<const Vector> source;  // original row
  double weight = 0.0;                   // original squared norm w
  double weight_sq = 0.0;                // rescaled squared norm
  Index source_index = 0;

  Vector row() const { return *source * std::sqrt(weight_sq / weight); }
};

// Stacks rescaled samples into a matrix, one row per sample.
Matrix stack(const std::vector<WeightedSample>& samples, Index dim);

// ell independent weighted reservoirs, each holding one row drawn with
// probability proportional to its squared norm.
class NormSampler {
 public:
  NormSampler(Index ell, Index dim, std::uint64_t seed);

  void update(const RowView& row);

  std::vector<WeightedSample> samples() const;
  Matrix finalize() const;
  double total_weight() const { return total_; }

 private:
  Index ell_;
  Index dim_;
  Rng rng_;
  double total_ = 0.0;
  Index seen_ = 0;
  std::vector<std::shared_ptr<const Vector>> slot_rows_;
  std::vector<double> slot_weights_;
  std::vector<Index> slot_index_;
};

// s_i = ||U_k(i)||^2 from the top-k left singular vectors of A.
std::vector<double> leverage_scores(const RowMatrix& a, Index k);

// ell i.i.d. draws with p_i = s_i / k, each rescaled by 1/sqrt(ell p_i).
Matrix leverage_sample(const RowMatrix& a, Index ell, Index k, std::uint64_t seed);

// The ell rows with the largest scores, verbatim, in stream order.
// Scores equal to 12 decimal places tie and the lower index wins.
Matrix deterministic_leverage(const RowMatrix& a, Index ell, Index k);
std::vector<Index> deterministic_leverage_rows(const std::vector<double>& scores, Index ell);

// Keeps the ell largest priorities w/u; weights become max(w, tau) at the end.
class PrioritySampler {
 public:
  PrioritySampler(Index ell, Index dim, std::uint64_t seed);

  void update(const RowView& row);
  // u in (0, 1] pinned by the caller.
  void update(const RowView& row, double u);

  double threshold() const { return tau_; }
  std::vector<WeightedSample> samples() const;
  Matrix finalize() const;

 private:
  struct Entry {
    double priority;
    double weight;
    Index index;
    std::shared_ptr<const Vector> row;
  };
  static bool outranks(const Entry& a, const Entry& b);

  Index ell_;
  Index dim_;
  Rng rng_;
  Index seen_ = 0;
  double tau_ = 0.0;
  std::vector<Entry> heap_;
};

// Variance-optimal sampling: exactly min(ell, n) rows whose adjusted weights
// sum to the total squared norm of the stream.
class VarOptSampler {
 public:
  VarOptSampler(Index ell, Index dim, std::uint64_t seed);

  void update(const RowView& row);

  double threshold() const { return tau_; }
  std::vector<WeightedSample> samples() const;
  Matrix finalize() const;
  // sum of adjusted weights currently held
  double total_weight() const;
  Index size() const { return static_cast<Index>(large_.size() + small_.size()); }

 private:
  struct Item {
    double weight;
    Index index;
    std::shared_ptr<const Vector> row;
  };
  static bool heavier(const Item& a, const Item& b);

  Index ell_;
  Index dim_;
  Rng rng_;
  Index seen_ = 0;
  double tau_ = 0.0;
  std::vector<Item> large_;  // min-heap by weight, kept with their own weight
  std::vector<Item> small_;  // adjusted weight tau each
};

}  // namespace sketchbench::sampling
