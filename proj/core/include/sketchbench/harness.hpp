#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sketchbench/algorithms.hpp"
#include "sketchbench/datasets.hpp"
#include "sketchbench/metrics.hpp"

namespace sketchbench::bench {

using metrics::ErrorReport;

enum class Format { csv, json };

struct MetricSet {
  bool cov = true;
  bool proj = true;
  bool time = true;
};

MetricSet parse_metrics(std::string_view list);
Format parse_format(std::string_view name);

struct ExperimentConfig {
  datasets::DatasetSpec dataset;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<Index> ells;
  Index trials = 5;
  Index k_proj = 10;
  std::uint64_t master_seed = 0;
  MetricSet metrics;
  Index threads = 1;
  std::int64_t max_entries = 100'000'000;
  std::string out;          // empty: standard output
  std::string summary_out;  // csv only; empty: derived from out
  Format format = Format::csv;
  std::function<void(const std::string&)> warn;  // defaults to standard error
};

void validate(const ExperimentConfig& cfg);

// mix(master_seed, hash(label), ell, trial)
std::uint64_t trial_seed(std::uint64_t master_seed, const std::string& label, Index ell, Index trial);

// Reports sorted by (algorithm label, ell, trial).
std::vector<ErrorReport> run_experiment(const ExperimentConfig& cfg);
std::vector<ErrorReport> run_experiment(const ExperimentConfig& cfg, const RowMatrix& a);

struct Summary {
  std::string algorithm;
  Index ell = 0;
  Index trials = 0;
  std::optional<double> cov_err_med;
  std::optional<double> proj_err_med;
  bool proj_exact = false;
  std::optional<std::int64_t> wall_ns_med;
};

// Lower median: element floor((n-1)/2) of the sorted values.
double lower_median(std::vector<double> values);

// Per-(algorithm, ell) medians, ordered by (algorithm, ell).
std::vector<Summary> summarize(const std::vector<ErrorReport>& reports);

}  // namespace sketchbench::bench
