#include "sketchbench/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sketchbench/linalg.hpp"
#include "spec_string.hpp"

namespace sketchbench::datasets {
namespace {

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view field, const std::string& source, std::size_t line) {
  const std::string t = detail::trim(field);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    parse_error(source, line, "malformed number '" + t + "'");
  }
  if (!std::isfinite(v)) parse_error(source, line, "non-finite value '" + t + "'");
  return v;
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void fill_normal(Matrix& m, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
  }
}

}  // namespace

Matrix random_rotation(Index m, Index d, Rng& rng) {
  if (m < 1 || m > d) throw std::invalid_argument("random_rotation needs 1 <= m <= d");
  Eigen::MatrixXd g(d, m);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < d; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, m);
  return q.transpose();
}

RowMatrix gen_random_noisy(Index n, Index d, Index m, double zeta, std::uint64_t seed) {
  if (n < 1 || d < 1 || m < 1) throw std::invalid_argument("random_noisy needs n, d, m >= 1");
  if (m >= d) {
    throw std::invalid_argument("random_noisy needs m < d (m=" + std::to_string(m) + ", d=" + std::to_string(d) + ")");
  }
  if (!(zeta > 0.0)) throw std::invalid_argument("random_noisy needs zeta > 0");
  Rng rng = make_rng(seed);
  Matrix s(n, m);
  fill_normal(s, rng);
  for (Index i = 0; i < m; ++i) s.col(i) *= 1.0 - static_cast<double>(i) / static_cast<double>(m);
  const Matrix u = random_rotation(m, d, rng);
  Matrix a = s * u;
  if (std::isfinite(zeta)) {
    Matrix f(n, d);
    fill_normal(f, rng);
    a += f / zeta;
  }
  return RowMatrix::from_dense(std::move(a));
}

RowMatrix gen_adversarial(Index n, Index d, Index m1, Index m2, std::uint64_t seed, double phase1_share,
                          bool rotate) {
  if (n < 1 || d < 1 || m1 < 1 || m2 < 1) throw std::invalid_argument("adversarial needs n, d, m1, m2 >= 1");
  if (m1 + m2 > d) {
    throw std::invalid_argument("adversarial needs m1 + m2 <= d (" + std::to_string(m1 + m2) + " > " +
                                std::to_string(d) + ")");
  }
  if (!(phase1_share >= 0.0 && phase1_share <= 1.0)) throw std::invalid_argument("adversarial split must lie in [0, 1]");
  const Index n1 = std::clamp<Index>(std::llround(phase1_share * static_cast<double>(n)), 0, n);
  Rng rng = make_rng(seed);
  Matrix a = Matrix::Zero(n, d);
  for (Index i = 0; i < n; ++i) {
    const bool first = i < n1;
    const Index offset = first ? 0 : m1;
    const Index width = first ? m1 : m2;
    double norm_sq = 0.0;
    for (Index j = 0; j < width; ++j) {
      const double v = uniform_open01(rng);
      a(i, offset + j) = v;
      norm_sq += v * v;
    }
    a.row(i) /= std::sqrt(norm_sq);
  }
  if (rotate) a = a * random_rotation(d, d, rng);
  return RowMatrix::from_dense(std::move(a));
}

RowMatrix gen_sparse_random(Index n, Index d, double density, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("sparse_random needs n, d >= 1");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("sparse_random density must lie in (0, 1]");
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::int64_t> row_ptr{0};
  std::vector<std::int32_t> cols;
  std::vector<double> vals;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (uniform_open01(rng) < density) {
        cols.push_back(static_cast<std::int32_t>(j));
        vals.push_back(normal(rng));
      }
    }
    row_ptr.push_back(static_cast<std::int64_t>(cols.size()));
  }
  return RowMatrix::from_csr(n, d, std::move(row_ptr), std::move(cols), std::move(vals));
}

FileFormat parse_file_format(std::string_view name) {
  const std::string s = lower(std::string(name));
  if (s == "dense-csv" || s == "csv") return FileFormat::dense_csv;
  if (s == "matrix-market" || s == "mtx" || s == "mm") return FileFormat::matrix_market;
  throw std::invalid_argument("unknown matrix format '" + std::string(name) + "'");
}

RowMatrix read_dense_csv(std::istream& in, const std::string& source) {
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (detail::trim(line).empty()) continue;
    Index count = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_number(rest.substr(0, comma), source, lineno));
      ++count;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (cols < 0) cols = count;
    if (count != cols) {
      parse_error(source, lineno, "expected " + std::to_string(cols) + " fields, found " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw std::runtime_error(source + ": no rows");
  Matrix m = Eigen::Map<Matrix>(values.data(), rows, cols);
  return RowMatrix::from_dense(std::move(m));
}

RowMatrix read_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw std::runtime_error(source + ": empty file");
  const std::vector<std::string> header = words(line);
  if (header.size() != 5 || header[0] != "%%MatrixMarket" || lower(header[1]) != "matrix") {
    parse_error(source, lineno, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  }
  if (lower(header[2]) != "coordinate") parse_error(source, lineno, "only coordinate format is supported");
  const std::string field = lower(header[3]);
  const std::string symmetry = lower(header[4]);
  if (field != "real" && field != "integer" && field != "pattern") {
    parse_error(source, lineno, "unsupported field type '" + header[3] + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    parse_error(source, lineno, "unsupported symmetry '" + header[4] + "'");
  }

  long long rows = -1, cols = -1, entries = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '%') continue;
    const std::vector<std::string> w = words(t);
    if (w.size() != 3) parse_error(source, lineno, "expected 'rows cols entries'");
    rows = detail::to_integer("rows", w[0]);
    cols = detail::to_integer("cols", w[1]);
    entries = detail::to_integer("entries", w[2]);
    if (rows < 1 || cols < 1 || entries < 0) parse_error(source, lineno, "invalid size line");
    break;
  }
  if (rows < 0) throw std::runtime_error(source + ": missing size line");
  if (symmetry == "symmetric" && rows != cols) parse_error(source, lineno, "symmetric matrix must be square");

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(entries));
  long long seen = 0;
  const std::size_t want = field == "pattern" ? 2 : 3;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '%') continue;
    const std::vector<std::string> w = words(t);
    if (w.size() != want) parse_error(source, lineno, "expected " + std::to_string(want) + " fields");
    if (seen == entries) parse_error(source, lineno, "more entries than declared");
    long long i = 0, j = 0;
    try {
      i = detail::to_integer("row", w[0]);
      j = detail::to_integer("col", w[1]);
    } catch (const std::invalid_argument& e) {
      parse_error(source, lineno, e.what());
    }
    if (i < 1 || i > rows || j < 1 || j > cols) parse_error(source, lineno, "index out of range");
    const double v = field == "pattern" ? 1.0 : parse_number(w[2], source, lineno);
    triplets.push_back({i - 1, j - 1, v});
    if (symmetry == "symmetric" && i != j) triplets.push_back({j - 1, i - 1, v});
    ++seen;
  }
  if (seen != entries) {
    throw std::runtime_error(source + ": declared " + std::to_string(entries) + " entries, found " + std::to_string(seen));
  }
  try {
    return RowMatrix::from_triplets(rows, cols, std::move(triplets));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(source + ": " + e.what());
  }
}

RowMatrix load_matrix(const std::string& path, FileFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return format == FileFormat::dense_csv ? read_dense_csv(in, path) : read_matrix_market(in, path);
}

void write_dense_csv(const RowMatrix& a, std::ostream& out) {
  std::vector<double> row(static_cast<std::size_t>(a.cols()));
  for (Index i = 0; i < a.rows(); ++i) {
    a.row(i).copy_to(row.data());
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ',';
      out << detail::format_double(row[j]);
    }
    out << '\n';
  }
}

void write_matrix_market(const RowMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    a.row(i).for_each_nonzero([&](Index j, double v) {
      out << i + 1 << ' ' << j + 1 << ' ' << detail::format_double(v) << '\n';
    });
  }
}

void save_matrix(const RowMatrix& a, const std::string& path, FileFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  if (format == FileFormat::dense_csv) {
    write_dense_csv(a, out);
  } else {
    write_matrix_market(a, out);
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

RowMatrix center_columns(const RowMatrix& a) {
  Matrix m = a.to_dense();
  if (m.rows() == 0) return RowMatrix::from_dense(std::move(m));
  const Eigen::RowVectorXd mean = m.colwise().mean();
  m.rowwise() -= mean;
  return RowMatrix::from_dense(std::move(m));
}

DatasetStats dataset_stats(const RowMatrix& a) {
  const double frob = a.frobenius_sq();
  if (!(frob > 0.0)) throw std::invalid_argument("dataset_stats: zero matrix");
  DatasetStats st;
  st.n = a.rows();
  st.d = a.cols();
  const std::vector<double> sigma = linalg::singular_values(a.to_dense());
  const double top = sigma.front();
  st.rank = static_cast<Index>(std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > 1e-10 * top; }));
  st.numeric_rank = frob / (top * top);
  const double total = static_cast<double>(a.rows()) * static_cast<double>(a.cols());
  st.nnz_pct = 100.0 * static_cast<double>(a.nnz()) / total;

  double sum = 0.0;
  Index stored = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    a.row(i).for_each_nonzero([&](Index, double v) {
      sum += v;
      ++stored;
    });
  }
  const double mean = sum / total;
  const double zeros = total - static_cast<double>(stored);
  double m2 = zeros * mean * mean;
  double m4 = zeros * std::pow(mean, 4);
  for (Index i = 0; i < a.rows(); ++i) {
    a.row(i).for_each_nonzero([&](Index, double v) {
      const double c = (v - mean) * (v - mean);
      m2 += c;
      m4 += c * c;
    });
  }
  m2 /= total;
  m4 /= total;
  st.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : std::numeric_limits<double>::quiet_NaN();
  return st;
}

RowMatrix materialize(const DatasetSpec& spec) {
  RowMatrix a = std::visit(
      [&](const auto& k) -> RowMatrix {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RandomNoisy>) {
          return gen_random_noisy(k.n, k.d, k.m, k.zeta, spec.seed);
        } else if constexpr (std::is_same_v<K, Adversarial>) {
          return gen_adversarial(k.n, k.d, k.m1, k.m2, spec.seed, k.phase1_share, k.rotate);
        } else if constexpr (std::is_same_v<K, SparseRandom>) {
          return gen_sparse_random(k.n, k.d, k.density, spec.seed);
        } else {
          return load_matrix(k.path, k.format);
        }
      },
      spec.kind);
  return spec.center ? center_columns(a) : a;
}

DatasetSpec parse_dataset_spec(std::string_view text, std::uint64_t default_seed) {
  const detail::SpecString s = detail::split_spec(text);
  DatasetSpec spec;
  spec.seed = default_seed;
  const std::string kind = lower(s.head);
  auto count = [](const std::string& key, const std::string& value) -> Index {
    const long long v = detail::to_integer(key, value);
    if (v < 0) throw std::invalid_argument("parameter " + key + " must be non-negative");
    return static_cast<Index>(v);
  };
  auto common = [&](const std::string& key, const std::string& value) {
    if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(detail::to_integer(key, value));
    } else if (key == "center") {
      spec.center = detail::to_bool(key, value);
    } else {
      throw std::invalid_argument("dataset '" + kind + "' has no parameter '" + key + "'");
    }
  };

  if (kind == "random_noisy" || kind == "random-noisy") {
    RandomNoisy k;
    for (const auto& [key, value] : s.params) {
      if (key == "n") k.n = count(key, value);
      else if (key == "d") k.d = count(key, value);
      else if (key == "m") k.m = count(key, value);
      else if (key == "zeta") k.zeta = detail::to_double(key, value);
      else common(key, value);
    }
    spec.kind = k;
  } else if (kind == "adversarial") {
    Adversarial k;
    for (const auto& [key, value] : s.params) {
      if (key == "n") k.n = count(key, value);
      else if (key == "d") k.d = count(key, value);
      else if (key == "m1") k.m1 = count(key, value);
      else if (key == "m2") k.m2 = count(key, value);
      else if (key == "split") k.phase1_share = detail::to_double(key, value);
      else if (key == "rotate") k.rotate = detail::to_bool(key, value);
      else common(key, value);
    }
    spec.kind = k;
  } else if (kind == "sparse_random" || kind == "sparse-random") {
    SparseRandom k;
    for (const auto& [key, value] : s.params) {
      if (key == "n") k.n = count(key, value);
      else if (key == "d") k.d = count(key, value);
      else if (key == "density") k.density = detail::to_double(key, value);
      else common(key, value);
    }
    spec.kind = k;
  } else if (kind == "file") {
    FileSource k;
    bool have_format = false;
    for (const auto& [key, value] : s.params) {
      if (key == "path") k.path = value;
      else if (key == "format") {
        k.format = parse_file_format(value);
        have_format = true;
      } else {
        common(key, value);
      }
    }
    if (k.path.empty()) throw std::invalid_argument("file dataset needs path=..");
    if (!have_format && k.path.size() >= 4 && lower(k.path.substr(k.path.size() - 4)) == ".mtx") {
      k.format = FileFormat::matrix_market;
    }
    spec.kind = k;
  } else {
    throw std::invalid_argument("unknown dataset kind '" + s.head + "'");
  }
  return spec;
}

std::string to_string(const DatasetSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RandomNoisy>) {
          os << "random_noisy:n=" << k.n << ",d=" << k.d << ",m=" << k.m << ",zeta=" << detail::format_double(k.zeta);
        } else if constexpr (std::is_same_v<K, Adversarial>) {
          os << "adversarial:n=" << k.n << ",d=" << k.d << ",m1=" << k.m1 << ",m2=" << k.m2
             << ",split=" << detail::format_double(k.phase1_share) << ",rotate=" << (k.rotate ? 1 : 0);
        } else if constexpr (std::is_same_v<K, SparseRandom>) {
          os << "sparse_random:n=" << k.n << ",d=" << k.d << ",density=" << detail::format_double(k.density);
        } else {
          os << "file:path=" << k.path << ",format=" << (k.format == FileFormat::dense_csv ? "dense-csv" : "matrix-market");
        }
      },
      spec.kind);
  os << ",seed=" << spec.seed << ",center=" << (spec.center ? 1 : 0);
  return os.str();
}

}  // namespace sketchbench::datasets
