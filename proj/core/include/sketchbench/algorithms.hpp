#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sketchbench/row_matrix.hpp"
#include "sketchbench/types.hpp"

namespace sketchbench::bench {

struct AlgorithmSpec {
  std::string name;                                  // canonical name
  std::vector<std::pair<std::string, double>> params;  // sorted by key, defaults filled in

  // "name" or "name:key=value,..."; used in reports and for seeding.
  std::string label() const;
  double param(std::string_view key) const;
  bool has(std::string_view key) const;
};

struct AlgorithmInfo {
  std::string name;
  std::string description;
  bool deterministic;
  bool streaming;  // false: needs the whole matrix at once
  Index min_ell;
};

const std::vector<AlgorithmInfo>& algorithm_catalog();
const AlgorithmInfo& algorithm_info(std::string_view name);

// Parses "name[:param=val,...]"; rejects unknown names and parameters.
AlgorithmSpec parse_algorithm(std::string_view text);

class Sketcher {
 public:
  virtual ~Sketcher() = default;
  // Streaming sketchers see A one row at a time, in order.
  virtual Matrix sketch(const RowMatrix& a) = 0;
};

std::unique_ptr<Sketcher> make_sketcher(const AlgorithmSpec& spec, Index ell, Index dim, std::uint64_t seed);

}  // namespace sketchbench::bench
