#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sketchbench/harness.hpp"

namespace sketchbench::bench {

// Flat TOML subset: `key = value` with strings, numbers, booleans and
// (possibly multi-line) arrays of those; `#` comments. Scalars yield one item.
using ConfigTable = std::vector<std::pair<std::string, std::vector<std::string>>>;

ConfigTable parse_config_text(std::string_view text, const std::string& source = "<config>");
ConfigTable load_config_file(const std::string& path);

// Collects settings from a config file and then from flags; later settings win.
class ConfigBuilder {
 public:
  // Keys: dataset, algo|algorithms, ell|ells, trials, k, seed, metrics, out,
  // summary, format, threads, max_entries. List values may also be comma-joined.
  void set(const std::string& key, const std::vector<std::string>& values);
  void apply(const ConfigTable& table);

  ExperimentConfig build() const;

 private:
  std::optional<std::string> dataset_;
  std::vector<std::string> algorithms_;
  std::vector<Index> ells_;
  std::optional<Index> trials_;
  std::optional<Index> k_;
  std::optional<std::uint64_t> seed_;
  std::optional<std::string> metrics_;
  std::optional<std::string> out_;
  std::optional<std::string> summary_;
  std::optional<std::string> format_;
  std::optional<Index> threads_;
  std::optional<std::int64_t> max_entries_;
};

}  // namespace sketchbench::bench
