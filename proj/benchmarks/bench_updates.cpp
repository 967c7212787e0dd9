#include <benchmark/benchmark.h>

#include "sketchbench/datasets.hpp"
#include "sketchbench/iterative.hpp"
#include "sketchbench/linalg.hpp"
#include "sketchbench/projection.hpp"
#include "sketchbench/sampling.hpp"

using namespace sketchbench;

namespace {

const RowMatrix& dense_input() {
  static const RowMatrix a = datasets::gen_random_noisy(2000, 200, 30, 10.0, 1);
  return a;
}

const RowMatrix& sparse_input() {
  static const RowMatrix a = datasets::gen_sparse_random(20000, 200, 0.01, 1);
  return a;
}

void BM_fd_update(benchmark::State& state) {
  const auto ell = static_cast<Index>(state.range(0));
  const RowMatrix& a = dense_input();
  for (auto _ : state) {
    iterative::IterativeSketch s(iterative::Variant::pfd, ell, a.cols(), 1.0);
    for (Index i = 0; i < a.rows(); ++i) s.update(a.row(i));
    benchmark::DoNotOptimize(s.finalize());
  }
  state.SetItemsProcessed(state.iterations() * a.rows());
}
BENCHMARK(BM_fd_update)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_hash_update(benchmark::State& state) {
  const auto ell = static_cast<Index>(state.range(0));
  const RowMatrix& a = sparse_input();
  for (auto _ : state) {
    auto s = projection::ProjectionSketch::hash(ell, a.cols(), 7);
    for (Index i = 0; i < a.rows(); ++i) s.update(a.row(i));
    benchmark::DoNotOptimize(s.finalize());
  }
  state.SetItemsProcessed(state.iterations() * a.rows());
}
BENCHMARK(BM_hash_update)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_norm_update(benchmark::State& state) {
  const auto ell = static_cast<Index>(state.range(0));
  const RowMatrix& a = dense_input();
  for (auto _ : state) {
    sampling::NormSampler s(ell, a.cols(), 7);
    for (Index i = 0; i < a.rows(); ++i) s.update(a.row(i));
    benchmark::DoNotOptimize(s.finalize());
  }
  state.SetItemsProcessed(state.iterations() * a.rows());
}
BENCHMARK(BM_norm_update)->Arg(50)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_svd(benchmark::State& state) {
  const auto rows = static_cast<Index>(state.range(0));
  const Matrix m = dense_input().to_dense().topRows(rows);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::svd(m));
}
BENCHMARK(BM_svd)->Arg(40)->Arg(80)->Arg(160)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
