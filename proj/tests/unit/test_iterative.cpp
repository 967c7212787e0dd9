#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "sketchbench/datasets.hpp"
#include "sketchbench/iterative.hpp"
#include "sketchbench/linalg.hpp"
#include "sketchbench/metrics.hpp"
#include "test_util.hpp"

using namespace sketchbench;
using iterative::IterativeSketch;
using iterative::Variant;
using sketchbench::testing::gaussian;
using sketchbench::testing::quad;
using sketchbench::testing::unit_vector;

namespace {

Matrix sketch(Variant v, Index ell, double alpha, const Matrix& a, double* delta = nullptr) {
  IterativeSketch s(v, ell, a.cols(), alpha);
  for (Index i = 0; i < a.rows(); ++i) s.update(std::span<const double>(a.row(i).data(), a.cols()));
  if (delta != nullptr) *delta = s.delta_total();
  return s.finalize();
}

// Gaussian rows with a decaying column scale.
Matrix decaying(Index n, Index d, std::uint64_t seed) {
  Matrix a = gaussian(n, d, seed);
  for (Index j = 0; j < d; ++j) a.col(j) *= std::pow(0.9, static_cast<double>(j));
  return a;
}

std::vector<Vector> probe_vectors(const Matrix& a, int random_count, std::uint64_t seed) {
  std::vector<Vector> xs;
  const auto s = linalg::svd(a);
  for (Index j = 0; j < s.spectrum.right_basis.rows(); ++j) xs.push_back(s.spectrum.right_basis.row(j).transpose());
  for (int r = 0; r < random_count; ++r) xs.push_back(unit_vector(a.cols(), seed + static_cast<std::uint64_t>(r)));
  return xs;
}

void expect_spectrum(const std::vector<double>& got, const std::vector<double>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-14) << "index " << i;
}

}  // namespace

TEST(ReduceRank, Isvd) {
  expect_spectrum(iterative::reduce_rank_isvd(std::vector<double>{2, 1}), {2, 0});
  expect_spectrum(iterative::reduce_rank_isvd(std::vector<double>{5, 5}), {5, 0});
  expect_spectrum(iterative::reduce_rank_isvd(std::vector<double>{0, 0}), {0, 0});
}

TEST(ReduceRank, Pfd) {
  auto r = iterative::reduce_rank_pfd(std::vector<double>{2, 1}, 1.0);
  expect_spectrum(r.values, {std::sqrt(3.0), 0});
  EXPECT_DOUBLE_EQ(r.delta, 1);
  r = iterative::reduce_rank_pfd(std::vector<double>{4, 3, 2, 1}, 0.5);
  expect_spectrum(r.values, {4, 3, std::sqrt(3.0), 0});
  EXPECT_DOUBLE_EQ(r.delta, 1);
  r = iterative::reduce_rank_pfd(std::vector<double>{1, 1}, 1.0);
  expect_spectrum(r.values, {0, 0});
  EXPECT_DOUBLE_EQ(r.delta, 1);
  EXPECT_THROW(iterative::reduce_rank_pfd(std::vector<double>{1, 1}, 0.0), std::invalid_argument);
  EXPECT_THROW(iterative::reduce_rank_pfd(std::vector<double>{1, 1}, 1.5), std::invalid_argument);
}

TEST(ReduceRank, PfdShrinkCount) {
  EXPECT_EQ(iterative::pfd_shrink_count(20, 0.2), 4);
  EXPECT_EQ(iterative::pfd_shrink_count(10, 0.01), 1);
  EXPECT_EQ(iterative::pfd_shrink_count(10, 0.25), 3);
  EXPECT_EQ(iterative::pfd_shrink_count(10, 1.0), 10);
}

TEST(ReduceRank, FastPfd) {
  auto r = iterative::reduce_rank_fast_pfd(std::vector<double>{4, 3, 2, 1}, 1.0);
  expect_spectrum(r.values, {std::sqrt(7.0), 0, 0, 0});
  EXPECT_DOUBLE_EQ(r.delta, 9);
  r = iterative::reduce_rank_fast_pfd(std::vector<double>{4, 3, 2, 1}, 0.5);
  expect_spectrum(r.values, {4, 3, 0, 0});
  EXPECT_DOUBLE_EQ(r.delta, 4);
  r = iterative::reduce_rank_fast_pfd(std::vector<double>{0, 0, 0, 0}, 0.7);
  expect_spectrum(r.values, {0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(r.delta, 0);
  EXPECT_THROW(iterative::reduce_rank_fast_pfd(std::vector<double>{1, 1}, -0.1), std::invalid_argument);
}

TEST(ReduceRank, FastPfdZeroesAtLeastHalfOfAffected) {
  const std::vector<double> sigma{9, 8, 7, 6, 5, 4, 3, 2, 1, 0.5};
  for (double alpha : {0.2, 0.3, 0.5, 0.8, 1.0}) {
    const auto r = iterative::reduce_rank_fast_pfd(sigma, alpha);
    const auto half = static_cast<long>(std::ceil(alpha * 10 / 2.0));
    EXPECT_GE(std::count(r.values.begin(), r.values.end(), 0.0), half) << alpha;
  }
}

TEST(ReduceRank, SpaceSaving) {
  auto r = iterative::reduce_rank_ss(std::vector<double>{3, 2, 1});
  expect_spectrum(r.values, {3, 0, std::sqrt(5.0)});
  EXPECT_DOUBLE_EQ(r.delta, 4);
  r = iterative::reduce_rank_ss(std::vector<double>{1, 1});
  expect_spectrum(r.values, {0, std::sqrt(2.0)});
  EXPECT_DOUBLE_EQ(r.delta, 1);
  r = iterative::reduce_rank_ss(std::vector<double>{2.5, 0});
  expect_spectrum(r.values, {0, 2.5});
  EXPECT_DOUBLE_EQ(r.delta, 6.25);
  EXPECT_THROW(iterative::reduce_rank_ss(std::vector<double>{1}), std::invalid_argument);
}

TEST(IterativeSketch, UnderFullBufferIsVerbatim) {
  const Matrix a = gaussian(2, 4, 1);
  for (Variant v : {Variant::isvd, Variant::pfd, Variant::fast_pfd, Variant::ss, Variant::cfd}) {
    IterativeSketch s(v, 3, 4);
    for (Index i = 0; i < 2; ++i) s.update(std::span<const double>(a.row(i).data(), 4));
    EXPECT_EQ(s.reductions(), 0);
    const Matrix b = s.finalize();
    EXPECT_EQ(b.topRows(2), a);
    EXPECT_EQ(b.row(2), Matrix::Zero(1, 4));
  }
}

TEST(IterativeSketch, FdTwoRowExample) {
  IterativeSketch s(Variant::pfd, 2, 2);
  s.update(std::vector<double>{2, 0});
  s.update(std::vector<double>{0, 1});
  EXPECT_EQ(s.reductions(), 1);
  EXPECT_DOUBLE_EQ(s.delta_total(), 1);
  const auto values = linalg::singular_values(s.finalize());
  EXPECT_NEAR(values[0], std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(values[1], 0, 1e-14);
  EXPECT_GE(s.zero_rows(), 1);
}

TEST(IterativeSketch, ZeroStreamStaysZero) {
  for (Variant v : {Variant::isvd, Variant::pfd, Variant::fast_pfd, Variant::ss, Variant::cfd}) {
    IterativeSketch s(v, 3, 5);
    for (int i = 0; i < 10; ++i) s.update(std::vector<double>(5, 0.0));
    EXPECT_EQ(s.finalize(), Matrix::Zero(3, 5));
    EXPECT_EQ(s.delta_total(), 0);
  }
}

TEST(IterativeSketch, CfdCompensationExample) {
  IterativeSketch s(Variant::cfd, 2, 2);
  s.update(std::vector<double>{3, 0});
  s.update(std::vector<double>{0, 2});
  // Buffer spectrum (sqrt 5, 0) with delta 4: compensated values (3, 2).
  const auto values = linalg::singular_values(s.finalize());
  EXPECT_NEAR(values[0], 3, 1e-12);
  EXPECT_NEAR(values[1], 2, 1e-12);
}

TEST(IterativeSketch, CfdWithoutReductionMatchesFd) {
  const Matrix a = gaussian(3, 6, 2);
  EXPECT_EQ(sketch(Variant::cfd, 5, 1.0, a), sketch(Variant::pfd, 5, 1.0, a));
}

TEST(IterativeSketch, Rejections) {
  EXPECT_THROW(IterativeSketch(Variant::pfd, 1, 3), std::invalid_argument);
  EXPECT_THROW(IterativeSketch(Variant::pfd, 4, 3, 0.0), std::invalid_argument);
  EXPECT_THROW(IterativeSketch(Variant::cfd, 4, 3, 0.5), std::invalid_argument);
  IterativeSketch s(Variant::pfd, 4, 3);
  EXPECT_THROW(s.update(std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(s.update(std::vector<double>{1, std::numeric_limits<double>::quiet_NaN(), 0}),
               std::invalid_argument);
}

TEST(IterativeSketch, AcceptsSparseRows) {
  const std::vector<std::int32_t> idx{1, 3};
  const std::vector<double> val{2.0, -1.0};
  IterativeSketch s(Variant::pfd, 3, 4);
  s.update(RowView::sparse(4, idx, val));
  EXPECT_EQ(s.buffer().row(0), sketchbench::testing::row_of({0, 2, 0, -1}));
}

TEST(IterativeSketch, WideSketchIsLossless) {
  const Matrix a = gaussian(200, 6, 3);
  const auto ra = RowMatrix::from_dense(a);
  for (Variant v : {Variant::isvd, Variant::pfd, Variant::ss, Variant::cfd}) {
    const Matrix b = sketch(v, 10, 1.0, a);
    EXPECT_LT(metrics::cov_err(ra, b), 1e-12);
  }
}

TEST(IterativeSketch, Deterministic) {
  const Matrix a = decaying(300, 20, 4);
  for (Variant v : {Variant::isvd, Variant::pfd, Variant::fast_pfd, Variant::ss, Variant::cfd}) {
    EXPECT_EQ(sketch(v, 8, 1.0, a), sketch(v, 8, 1.0, a));
  }
}

TEST(IterativeSketch, DeltaNonDecreasingAndFreeRowAfterReduce) {
  const Matrix a = decaying(200, 15, 5);
  IterativeSketch s(Variant::pfd, 6, 15, 0.5);
  double last = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    const Index before = s.reductions();
    s.update(std::span<const double>(a.row(i).data(), 15));
    EXPECT_GE(s.delta_total(), last);
    last = s.delta_total();
    if (s.reductions() > before) { EXPECT_GE(s.zero_rows(), 1); }
  }
}

class PfdProperties : public ::testing::TestWithParam<std::tuple<double, std::uint64_t>> {};

TEST_P(PfdProperties, PropertiesOneTwoThreeAndGuarantees) {
  const auto [alpha, seed] = GetParam();
  const Index n = 400, d = 30, ell = 10;
  const Matrix a = decaying(n, d, seed);
  const auto ra = RowMatrix::from_dense(a);
  double delta = 0.0;
  const Matrix b = sketch(Variant::pfd, ell, alpha, a, &delta);
  const double frob = a.squaredNorm();

  for (const Vector& x : probe_vectors(a, 100, seed * 1000)) {
    const double gap = quad(a, x) - quad(b, x);
    EXPECT_GE(gap, -1e-6 * frob);
    EXPECT_LE(gap, delta * (1 + 1e-6));
  }
  const double m = static_cast<double>(iterative::pfd_shrink_count(ell, alpha));
  EXPECT_NEAR(frob - b.squaredNorm(), m * delta, 1e-6 * frob);

  const double al = alpha * static_cast<double>(ell);
  const double cov = metrics::cov_err(ra, b);
  for (Index k = 0; static_cast<double>(k) < al; ++k) {
    EXPECT_LE(cov, linalg::rank_k_residual_sq(ra, k) / ((al - static_cast<double>(k)) * frob) * (1 + 1e-6)) << k;
    if (k >= 1) { EXPECT_LE(metrics::proj_err(ra, b, k).value, al / (al - static_cast<double>(k)) + 1e-6) << k; }
  }
}

INSTANTIATE_TEST_SUITE_P(Alphas, PfdProperties,
                         ::testing::Combine(::testing::Values(0.2, 0.5, 1.0), ::testing::Values(1u, 2u, 3u)));

TEST(SpaceSavingDirections, FrobeniusPreservedAndBounded) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Index ell = 12;
    const Matrix a = decaying(500, 40, seed);
    const auto ra = RowMatrix::from_dense(a);
    const Matrix b = sketch(Variant::ss, ell, 1.0, a);
    EXPECT_NEAR(b.squaredNorm(), a.squaredNorm(), 1e-6 * a.squaredNorm());
    const double cov = metrics::cov_err(ra, b) * a.squaredNorm();
    const double half = static_cast<double>(ell) / 2.0 - 0.5;
    for (Index k = 0; static_cast<double>(k) < half; ++k) {
      const double bound = linalg::rank_k_residual_sq(ra, k) / (half - static_cast<double>(k));
      EXPECT_LE(cov, bound * (1 + 1e-6)) << "seed " << seed << " k " << k;
    }
    for (const Vector& x : probe_vectors(a, 20, seed)) {
      EXPECT_LE(std::abs(quad(a, x) - quad(b, x)), linalg::rank_k_residual_sq(ra, 0) / half * (1 + 1e-6));
    }
  }
}

TEST(CompensativeFd, FrobeniusPreservedAndDeltaBound) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Matrix a = decaying(400, 30, seed);
    double delta = 0.0;
    const Matrix b = sketch(Variant::cfd, 10, 1.0, a, &delta);
    EXPECT_GT(delta, 0);
    EXPECT_NEAR(b.squaredNorm(), a.squaredNorm(), 1e-6 * a.squaredNorm());
    for (const Vector& x : probe_vectors(a, 100, seed * 7)) {
      EXPECT_LE(std::abs(quad(a, x) - quad(b, x)), delta * (1 + 1e-6));
    }
  }
}

TEST(FastPfd, TwiceTheRowsMeetsTheBound) {
  for (double alpha : {0.2, 0.5, 1.0}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Index ell = 10;
      const Matrix a = decaying(500, 40, seed);
      const auto ra = RowMatrix::from_dense(a);
      const Matrix b = sketch(Variant::fast_pfd, 2 * ell, alpha, a);
      const double cov = metrics::cov_err(ra, b);
      const double al = alpha * static_cast<double>(ell);
      for (Index k = 0; static_cast<double>(k) < al; ++k) {
        EXPECT_LE(cov, linalg::rank_k_residual_sq(ra, k) / ((al - static_cast<double>(k)) * a.squaredNorm()) *
                           (1 + 1e-6))
            << "alpha " << alpha << " seed " << seed << " k " << k;
      }
    }
  }
}

TEST(IterativeSketch, IsvdStructure) {
  const Matrix a = decaying(300, 25, 9);
  IterativeSketch s(Variant::isvd, 8, 25);
  for (Index i = 0; i < a.rows(); ++i) s.update(std::span<const double>(a.row(i).data(), 25));
  const Matrix b = s.finalize();
  EXPECT_EQ(b.rows(), 8);
  EXPECT_EQ(b.cols(), 25);
  EXPECT_LE(b.squaredNorm(), a.squaredNorm() * (1 + 1e-12));
  EXPECT_GE(s.zero_rows(), 1);
}

TEST(IterativeSketch, RandomNoisyDatasetGuarantee) {
  const auto a = datasets::gen_random_noisy(500, 50, 10, 10.0, 3);
  IterativeSketch s(Variant::pfd, 20, 50, 0.5);
  for (Index i = 0; i < a.rows(); ++i) s.update(a.row(i));
  const Matrix b = s.finalize();
  const double frob = a.frobenius_sq();
  for (Index k = 0; k < 10; ++k) {
    EXPECT_LE(metrics::cov_err(a, b),
              linalg::rank_k_residual_sq(a, k) / ((10.0 - static_cast<double>(k)) * frob) * (1 + 1e-6));
  }
}
