#include "sketchbench/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sketchbench/linalg.hpp"

namespace sketchbench::sampling {
namespace {

void check_sizes(Index ell, Index dim) {
  if (ell < 1) throw std::invalid_argument("sample size ell must be >= 1");
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
}

void check_row(const RowView& row, Index dim) {
  if (row.dim() != dim) {
    throw std::invalid_argument("row has length " + std::to_string(row.dim()) + ", sampler expects " +
                                std::to_string(dim));
  }
  if (!row.all_finite()) throw std::invalid_argument("row has non-finite entries");
}

std::vector<WeightedSample> by_index(std::vector<WeightedSample> s) {
  std::sort(s.begin(), s.end(),
            [](const WeightedSample& a, const WeightedSample& b) { return a.source_index < b.source_index; });
  return s;
}

}  // namespace

Matrix stack(const std::vector<WeightedSample>& samples, Index dim) {
  Matrix b(static_cast<Index>(samples.size()), dim);
  for (std::size_t i = 0; i < samples.size(); ++i) b.row(static_cast<Index>(i)) = samples[i].row().transpose();
  return b;
}

NormSampler::NormSampler(Index ell, Index dim, std::uint64_t seed)
    : ell_(ell), dim_(dim), rng_(make_rng(seed)) {
  check_sizes(ell, dim);
  slot_rows_.resize(static_cast<std::size_t>(ell));
  slot_weights_.assign(static_cast<std::size_t>(ell), 0.0);
  slot_index_.assign(static_cast<std::size_t>(ell), 0);
}

void NormSampler::update(const RowView& row) {
  check_row(row, dim_);
  const Index index = seen_++;
  const double w = row.squared_norm();
  if (w == 0.0) return;
  total_ += w;
  const double p = w / total_;
  auto shared = std::make_shared<const Vector>(row.to_dense());
  auto take = [&](Index slot) {
    slot_rows_[slot] = shared;
    slot_weights_[slot] = w;
    slot_index_[slot] = index;
  };
  if (p >= 1.0) {
    for (Index j = 0; j < ell_; ++j) take(j);
    return;
  }
  // Each slot switches independently with probability p; jump between switches.
  std::geometric_distribution<Index> gap(p);
  for (Index j = gap(rng_); j < ell_; j += 1 + gap(rng_)) take(j);
}

std::vector<WeightedSample> NormSampler::samples() const {
  if (total_ == 0.0) throw std::invalid_argument("norm sampling needs at least one nonzero row");
  std::vector<WeightedSample> out;
  out.reserve(static_cast<std::size_t>(ell_));
  for (Index j = 0; j < ell_; ++j) {
    out.push_back({slot_rows_[j], slot_weights_[j], total_ / static_cast<double>(ell_), slot_index_[j]});
  }
  return out;
}

Matrix NormSampler::finalize() const { return stack(samples(), dim_); }

std::vector<double> leverage_scores(const RowMatrix& a, Index k) {
  if (k < 1) throw std::invalid_argument("leverage scores need k >= 1");
  if (a.rows() < 1) throw std::invalid_argument("leverage scores of an empty matrix");
  const linalg::SvdResult s = linalg::svd(a.to_dense(), true);
  const Index rank = s.spectrum.rank();
  if (k > rank) {
    throw std::invalid_argument("leverage scores: k=" + std::to_string(k) + " exceeds rank(A)=" +
                                std::to_string(rank));
  }
  std::vector<double> scores(static_cast<std::size_t>(a.rows()));
  for (Index i = 0; i < a.rows(); ++i) scores[i] = s.left.row(i).head(k).squaredNorm();
  return scores;
}

Matrix leverage_sample(const RowMatrix& a, Index ell, Index k, std::uint64_t seed) {
  check_sizes(ell, a.cols());
  const std::vector<double> scores = leverage_scores(a, k);
  std::vector<double> cumulative(scores.size());
  std::partial_sum(scores.begin(), scores.end(), cumulative.begin());
  const double total = cumulative.back();
  Rng rng = make_rng(seed);
  Matrix b(ell, a.cols());
  for (Index j = 0; j < ell; ++j) {
    const double x = uniform_open01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    if (it == cumulative.end()) --it;
    auto i = static_cast<Index>(it - cumulative.begin());
    while (scores[i] == 0.0) --i;
    const double p = scores[i] / total;
    b.row(j) = a.row(i).to_dense().transpose() / std::sqrt(static_cast<double>(ell) * p);
  }
  return b;
}

std::vector<Index> deterministic_leverage_rows(const std::vector<double>& scores, Index ell) {
  std::vector<Index> order(scores.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<long long> key(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) key[i] = std::llround(scores[i] * 1e12);
  const auto keep = static_cast<std::size_t>(std::min<Index>(ell, static_cast<Index>(scores.size())));
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](Index a, Index b) { return key[a] != key[b] ? key[a] > key[b] : a < b; });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

Matrix deterministic_leverage(const RowMatrix& a, Index ell, Index k) {
  check_sizes(ell, a.cols());
  const std::vector<Index> rows = deterministic_leverage_rows(leverage_scores(a, k), ell);
  Matrix b(static_cast<Index>(rows.size()), a.cols());
  for (std::size_t j = 0; j < rows.size(); ++j) b.row(static_cast<Index>(j)) = a.row(rows[j]).to_dense().transpose();
  return b;
}

PrioritySampler::PrioritySampler(Index ell, Index dim, std::uint64_t seed)
    : ell_(ell), dim_(dim), rng_(make_rng(seed)) {
  check_sizes(ell, dim);
}

bool PrioritySampler::outranks(const Entry& a, const Entry& b) {
  return a.priority != b.priority ? a.priority > b.priority : a.index < b.index;
}

void PrioritySampler::update(const RowView& row) { update(row, uniform_open01(rng_)); }

void PrioritySampler::update(const RowView& row, double u) {
  check_row(row, dim_);
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("priority draw u must lie in (0, 1]");
  const Index index = seen_++;
  const double w = row.squared_norm();
  if (w == 0.0) return;
  const double priority = w / u;
  if (static_cast<Index>(heap_.size()) == ell_) {
    const Entry& weakest = heap_.front();
    if (!outranks(Entry{priority, w, index, nullptr}, weakest)) {
      tau_ = std::max(tau_, priority);
      return;
    }
    tau_ = std::max(tau_, weakest.priority);
    std::pop_heap(heap_.begin(), heap_.end(), outranks);
    heap_.pop_back();
  }
  heap_.push_back({priority, w, index, std::make_shared<const Vector>(row.to_dense())});
  std::push_heap(heap_.begin(), heap_.end(), outranks);
}

std::vector<WeightedSample> PrioritySampler::samples() const {
  std::vector<WeightedSample> out;
  out.reserve(heap_.size());
  for (const Entry& e : heap_) out.push_back({e.row, e.weight, std::max(e.weight, tau_), e.index});
  return by_index(std::move(out));
}

Matrix PrioritySampler::finalize() const { return stack(samples(), dim_); }

VarOptSampler::VarOptSampler(Index ell, Index dim, std::uint64_t seed)
    : ell_(ell), dim_(dim), rng_(make_rng(seed)) {
  check_sizes(ell, dim);
}

bool VarOptSampler::heavier(const Item& a, const Item& b) {
  return a.weight != b.weight ? a.weight > b.weight : a.index < b.index;
}

void VarOptSampler::update(const RowView& row) {
  check_row(row, dim_);
  const Index index = seen_++;
  const double w = row.squared_norm();
  if (w == 0.0) return;
  large_.push_back({w, index, std::make_shared<const Vector>(row.to_dense())});
  std::push_heap(large_.begin(), large_.end(), heavier);
  if (size() <= ell_) return;

  // Move the lightest large items into the small set while they fall below the new threshold.
  double small_total = tau_ * static_cast<double>(small_.size());
  auto count = static_cast<Index>(small_.size());
  std::vector<Item> moved;
  while (!large_.empty()) {
    const double m = large_.front().weight;
    if (m * static_cast<double>(count) > small_total + m) break;
    std::pop_heap(large_.begin(), large_.end(), heavier);
    moved.push_back(std::move(large_.back()));
    large_.pop_back();
    small_total += m;
    ++count;
  }
  const double next_tau = small_total / static_cast<double>(count - 1);

  // Drop exactly one small item; item i goes with probability 1 - w_i / next_tau.
  double r = uniform_open01(rng_);
  std::ptrdiff_t drop_moved = -1;
  for (std::size_t i = 0; i < moved.size(); ++i) {
    r -= 1.0 - moved[i].weight / next_tau;
    if (r < 0.0) {
      drop_moved = static_cast<std::ptrdiff_t>(i);
      break;
    }
  }
  if (drop_moved < 0 && small_.empty()) drop_moved = static_cast<std::ptrdiff_t>(moved.size()) - 1;
  if (drop_moved >= 0) {
    moved.erase(moved.begin() + drop_moved);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, small_.size() - 1);
    const std::size_t j = pick(rng_);
    small_[j] = std::move(small_.back());
    small_.pop_back();
  }
  for (Item& it : moved) small_.push_back(std::move(it));
  tau_ = next_tau;
}

double VarOptSampler::total_weight() const {
  double s = tau_ * static_cast<double>(small_.size());
  for (const Item& it : large_) s += it.weight;
  return s;
}

std::vector<WeightedSample> VarOptSampler::samples() const {
  std::vector<WeightedSample> out;
  out.reserve(large_.size() + small_.size());
  for (const Item& it : large_) out.push_back({it.row, it.weight, it.weight, it.index});
  for (const Item& it : small_) out.push_back({it.row, it.weight, tau_, it.index});
  return by_index(std::move(out));
}

Matrix VarOptSampler::finalize() const { return stack(samples(), dim_); }

}  // namespace sketchbench::sampling
