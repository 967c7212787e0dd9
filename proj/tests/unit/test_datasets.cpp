#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "sketchbench/datasets.hpp"
#include "sketchbench/linalg.hpp"
#include "test_util.hpp"

using namespace sketchbench;
namespace ds = sketchbench::datasets;
using sketchbench::testing::gaussian;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sketchbench_" + name)).string();
}

std::string error_of(const std::string& text, bool mtx) {
  std::istringstream in(text);
  try {
    if (mtx) ds::read_matrix_market(in, "t");
    else ds::read_dense_csv(in, "t");
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(RandomNoisy, ShapeRankAndDeterminism) {
  const auto a = ds::gen_random_noisy(1000, 100, 30, 10.0, 4);
  EXPECT_EQ(a.rows(), 1000);
  EXPECT_EQ(a.cols(), 100);
  EXPECT_EQ(ds::dataset_stats(a).rank, 100);
  EXPECT_EQ(a.to_dense(), ds::gen_random_noisy(1000, 100, 30, 10.0, 4).to_dense());
  EXPECT_NE(a.to_dense(), ds::gen_random_noisy(1000, 100, 30, 10.0, 5).to_dense());
}

TEST(RandomNoisy, PureSignalHasRankM) {
  const auto a = ds::gen_random_noisy(300, 60, 12, std::numeric_limits<double>::infinity(), 2);
  EXPECT_EQ(ds::dataset_stats(a).rank, 12);
}

TEST(RandomNoisy, FrobeniusMoment) {
  const Index n = 1000, d = 100, m = 30;
  const double zeta = 10.0;
  double s2 = 0.0, s4 = 0.0;
  for (Index i = 0; i < m; ++i) {
    const double dii = 1.0 - static_cast<double>(i) / static_cast<double>(m);
    s2 += dii * dii;
    s4 += std::pow(dii, 4);
  }
  const double nd = static_cast<double>(n);
  const double expect = nd * (s2 + static_cast<double>(d) / (zeta * zeta));
  const double sd = std::sqrt(2 * nd * s4 + 2 * nd * static_cast<double>(d) / std::pow(zeta, 4) + 4 * nd * s2 / (zeta * zeta));
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    EXPECT_NEAR(ds::gen_random_noisy(n, d, m, zeta, seed).frobenius_sq(), expect, 3 * sd) << seed;
  }
}

TEST(RandomNoisy, Rejections) {
  EXPECT_THROW(ds::gen_random_noisy(10, 5, 5, 10.0, 1), std::invalid_argument);
  EXPECT_THROW(ds::gen_random_noisy(10, 5, 2, 0.0, 1), std::invalid_argument);
}

TEST(RandomRotation, OrthonormalRows) {
  Rng rng = make_rng(3);
  const Matrix u = ds::random_rotation(7, 20, rng);
  EXPECT_LT((u * u.transpose() - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Adversarial, UnitRowsAndOrthogonalPhases) {
  const Index n = 1000;
  const auto a = ds::gen_adversarial(n, 100, 80, 4, 7);
  const Matrix m = a.to_dense();
  EXPECT_NEAR(a.frobenius_sq(), static_cast<double>(n), 1e-9);
  for (Index i = 0; i < n; ++i) EXPECT_NEAR(m.row(i).squaredNorm(), 1.0, 1e-12);
  const auto n1 = static_cast<Index>(std::llround(ds::kDefaultPhase1Share * static_cast<double>(n)));
  EXPECT_EQ(m.topRows(n1).rightCols(20).cwiseAbs().maxCoeff(), 0);
  EXPECT_EQ(m.bottomRows(n - n1).leftCols(80).cwiseAbs().maxCoeff(), 0);
  EXPECT_EQ(m.row(0).dot(m.row(n - 1)), 0.0);
  EXPECT_EQ((m.topRows(n1) * m.bottomRows(n - n1).transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Adversarial, PhaseTwoSubspaceOrthogonalToPhaseOne) {
  const Index n = 600;
  const auto a = ds::gen_adversarial(n, 60, 40, 4, 2);
  const Matrix m = a.to_dense();
  const auto n1 = static_cast<Index>(std::llround(ds::kDefaultPhase1Share * static_cast<double>(n)));
  const auto top = linalg::RankKProjection::top_k(m.bottomRows(n - n1), 4);
  EXPECT_LT((m.topRows(n1) * top.basis().transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Adversarial, SplitAndRotateOptions) {
  const Matrix half = ds::gen_adversarial(100, 20, 10, 3, 1, 0.5).to_dense();
  EXPECT_EQ(half.row(49).rightCols(10).cwiseAbs().maxCoeff(), 0);
  EXPECT_EQ(half.row(50).leftCols(10).cwiseAbs().maxCoeff(), 0);
  const auto rot = ds::gen_adversarial(100, 20, 10, 3, 1, 0.5, true);
  EXPECT_NEAR(rot.frobenius_sq(), 100, 1e-9);
  EXPECT_EQ(ds::dataset_stats(rot).rank, 13);
  EXPECT_THROW(ds::gen_adversarial(10, 5, 4, 2, 1), std::invalid_argument);
}

TEST(SparseRandom, DensityAndStorage) {
  const auto a = ds::gen_sparse_random(2000, 100, 0.01, 3);
  EXPECT_TRUE(a.is_sparse());
  const double expect = 2000 * 100 * 0.01;
  EXPECT_NEAR(static_cast<double>(a.nnz()), expect, 4 * std::sqrt(expect));
}

TEST(Loader, DenseCsvIdentity) {
  std::istringstream in("1,0\n0,1\n");
  EXPECT_EQ(ds::read_dense_csv(in).to_dense(), Matrix::Identity(2, 2));
}

TEST(Loader, MatrixMarketCoordinate) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real general\n% comment\n2 2 3\n1 1 1.5\n2 1 -2\n2 2 4\n");
  const auto a = ds::read_matrix_market(in);
  EXPECT_TRUE(a.is_sparse());
  EXPECT_EQ(a.nnz(), 3);
  Matrix want(2, 2);
  want << 1.5, 0, -2, 4;
  EXPECT_EQ(a.to_dense(), want);
}

TEST(Loader, MatrixMarketSymmetricAndPattern) {
  std::istringstream sym("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 1 3\n");
  Matrix want(2, 2);
  want << 1, 3, 3, 0;
  EXPECT_EQ(ds::read_matrix_market(sym).to_dense(), want);
  std::istringstream pat("%%MatrixMarket matrix coordinate pattern general\n2 3 2\n1 3\n2 1\n");
  Matrix want2(2, 3);
  want2 << 0, 0, 1, 1, 0, 0;
  EXPECT_EQ(ds::read_matrix_market(pat).to_dense(), want2);
}

TEST(Loader, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_of("1,2\n3,x\n", false).find("t:2"), std::string::npos);
  EXPECT_NE(error_of("1,2\n3,4,5\n", false).find("t:2"), std::string::npos);
  EXPECT_NE(error_of("1,2\n\n3\n", false).find("t:3"), std::string::npos);
  EXPECT_NE(error_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n", true).find("t:3"),
            std::string::npos);
  EXPECT_NE(error_of("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n", true), "");
  EXPECT_NE(error_of("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n", true), "");
  EXPECT_NE(error_of("", false), "");
}

TEST(Loader, RoundTripPreservesFrobenius) {
  const auto dense = RowMatrix::from_dense(gaussian(13, 5, 2));
  const auto sparse = ds::gen_sparse_random(40, 9, 0.2, 1);
  for (const auto* a : {&dense, &sparse}) {
    for (auto fmt : {ds::FileFormat::dense_csv, ds::FileFormat::matrix_market}) {
      const std::string path = temp_path("roundtrip.txt");
      ds::save_matrix(*a, path, fmt);
      const auto b = ds::load_matrix(path, fmt);
      std::filesystem::remove(path);
      EXPECT_EQ(b.rows(), a->rows());
      EXPECT_EQ(b.cols(), a->cols());
      EXPECT_NEAR(b.frobenius_sq(), a->frobenius_sq(), 1e-12 * a->frobenius_sq());
      EXPECT_EQ(b.to_dense(), a->to_dense());
    }
  }
}

TEST(Loader, MissingFileNamesPath) {
  try {
    ds::load_matrix("/nonexistent/dir/m.csv", ds::FileFormat::dense_csv);
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/m.csv"), std::string::npos);
  }
}

TEST(Stats, Identity) {
  const auto s = ds::dataset_stats(RowMatrix::from_dense(Matrix::Identity(8, 8)));
  EXPECT_EQ(s.rank, 8);
  EXPECT_NEAR(s.numeric_rank, 8, 1e-12);
  EXPECT_NEAR(s.nnz_pct, 100.0 / 8, 1e-12);
}

TEST(Stats, RankOne) {
  const auto a = RowMatrix::from_dense(gaussian(10, 1, 1) * gaussian(1, 6, 2));
  const auto s = ds::dataset_stats(a);
  EXPECT_EQ(s.rank, 1);
  EXPECT_NEAR(s.numeric_rank, 1, 1e-12);
}

TEST(Stats, NormalKurtosis) {
  const auto s = ds::dataset_stats(sketchbench::testing::gaussian_rows(1000, 10, 3));
  EXPECT_NEAR(s.excess_kurtosis, 0, 0.5);
  EXPECT_NEAR(s.nnz_pct, 100, 1e-12);
}

TEST(Stats, SparseMatchesDense) {
  const auto a = ds::gen_sparse_random(200, 30, 0.1, 5);
  const auto s = ds::dataset_stats(a);
  const auto t = ds::dataset_stats(RowMatrix::from_dense(a.to_dense()));
  EXPECT_EQ(s.rank, t.rank);
  EXPECT_NEAR(s.numeric_rank, t.numeric_rank, 1e-9);
  EXPECT_NEAR(s.nnz_pct, t.nnz_pct, 1e-12);
  EXPECT_NEAR(s.excess_kurtosis, t.excess_kurtosis, 1e-9);
}

TEST(Stats, RejectsZeroMatrix) {
  EXPECT_THROW(ds::dataset_stats(RowMatrix::from_dense(Matrix::Zero(3, 3))), std::invalid_argument);
}

TEST(Center, ColumnSumsVanish) {
  Matrix m = gaussian(50, 6, 1);
  m.array() += 3.0;
  const Matrix c = ds::center_columns(RowMatrix::from_dense(m)).to_dense();
  EXPECT_LT(c.colwise().sum().cwiseAbs().maxCoeff(), 1e-9);
}

TEST(DatasetSpec, ParseMaterializeAndRoundTrip) {
  const auto spec = ds::parse_dataset_spec("random_noisy:n=50,d=8,m=3,zeta=5,seed=9");
  const auto& k = std::get<ds::RandomNoisy>(spec.kind);
  EXPECT_EQ(k.n, 50);
  EXPECT_EQ(k.d, 8);
  EXPECT_EQ(k.m, 3);
  EXPECT_EQ(k.zeta, 5);
  EXPECT_EQ(spec.seed, 9u);
  EXPECT_EQ(ds::materialize(spec).to_dense(), ds::gen_random_noisy(50, 8, 3, 5, 9).to_dense());
  const auto again = ds::parse_dataset_spec(ds::to_string(spec));
  EXPECT_EQ(ds::materialize(again).to_dense(), ds::materialize(spec).to_dense());

  EXPECT_EQ(ds::parse_dataset_spec("adversarial", 17).seed, 17u);
  const auto centered = ds::materialize(ds::parse_dataset_spec("adversarial:n=40,d=10,m1=5,m2=2,center=1"));
  EXPECT_LT(centered.to_dense().colwise().sum().cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(ds::parse_dataset_spec("random_noisy:q=1"), std::invalid_argument);
  EXPECT_THROW(ds::parse_dataset_spec("birds"), std::invalid_argument);
}

TEST(DatasetSpec, FileKindInfersFormat) {
  const std::string path = temp_path("spec.mtx");
  ds::save_matrix(RowMatrix::from_dense(Matrix::Identity(3, 3)), path, ds::FileFormat::matrix_market);
  const auto spec = ds::parse_dataset_spec("file:path=" + path);
  EXPECT_EQ(std::get<ds::FileSource>(spec.kind).format, ds::FileFormat::matrix_market);
  EXPECT_EQ(ds::materialize(spec).to_dense(), Matrix::Identity(3, 3));
  std::filesystem::remove(path);
}
