#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "sketchbench/random.hpp"
#include "sketchbench/row_matrix.hpp"
#include "sketchbench/types.hpp"

namespace sketchbench::datasets {

enum class FileFormat { dense_csv, matrix_market };

inline constexpr double kDefaultPhase1Share = 0.8;

// A = S D U + F / zeta
struct RandomNoisy {
  Index n = 10000;
  Index d = 500;
  Index m = 30;
  double zeta = 10.0;
};

// Unit rows from one m1-dim subspace, then unit rows from an orthogonal m2-dim subspace.
struct Adversarial {
  Index n = 10000;
  Index d = 500;
  Index m1 = 400;
  Index m2 = 4;
  double phase1_share = kDefaultPhase1Share;
  bool rotate = false;
};

// Gaussian entries kept independently with probability density; sparse storage.
struct SparseRandom {
  Index n = 20000;
  Index d = 200;
  double density = 0.01;
};

struct FileSource {
  std::string path;
  FileFormat format = FileFormat::dense_csv;
};

struct DatasetSpec {
  std::variant<RandomNoisy, Adversarial, SparseRandom, FileSource> kind;
  std::uint64_t seed = 0;
  bool center = false;
};

struct DatasetStats {
  Index n = 0;
  Index d = 0;
  Index rank = 0;
  double numeric_rank = 0.0;
  double nnz_pct = 0.0;
  double excess_kurtosis = 0.0;
};

RowMatrix gen_random_noisy(Index n, Index d, Index m, double zeta, std::uint64_t seed);
RowMatrix gen_adversarial(Index n, Index d, Index m1, Index m2, std::uint64_t seed,
                          double phase1_share = kDefaultPhase1Share, bool rotate = false);
RowMatrix gen_sparse_random(Index n, Index d, double density, std::uint64_t seed);

// m x d with orthonormal rows, from the QR factor of a Gaussian matrix.
Matrix random_rotation(Index m, Index d, Rng& rng);

FileFormat parse_file_format(std::string_view name);
RowMatrix load_matrix(const std::string& path, FileFormat format);
RowMatrix read_dense_csv(std::istream& in, const std::string& source = "<stream>");
RowMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
void save_matrix(const RowMatrix& a, const std::string& path, FileFormat format);
void write_dense_csv(const RowMatrix& a, std::ostream& out);
void write_matrix_market(const RowMatrix& a, std::ostream& out);

// Subtracts column means; the result is dense.
RowMatrix center_columns(const RowMatrix& a);

DatasetStats dataset_stats(const RowMatrix& a);

RowMatrix materialize(const DatasetSpec& spec);

// "random_noisy:n=..,d=..,m=..,zeta=..", "adversarial:n=..,d=..,m1=..,m2=..,split=..",
// "sparse_random:n=..,d=..,density=..", "file:path=..,format=dense-csv|matrix-market".
// Every kind also accepts seed=.. and center=0|1.
DatasetSpec parse_dataset_spec(std::string_view text, std::uint64_t default_seed = 0);
std::string to_string(const DatasetSpec& spec);

}  // namespace sketchbench::datasets
