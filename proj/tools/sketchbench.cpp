#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "sketchbench/algorithms.hpp"
#include "sketchbench/config.hpp"
#include "sketchbench/datasets.hpp"
#include "sketchbench/harness.hpp"
#include "sketchbench/report.hpp"

namespace sb = sketchbench;
namespace bench = sketchbench::bench;

namespace {

struct RunFlags {
  std::string config;
  std::vector<std::string> algos;
  std::string dataset;
  std::vector<std::string> ells;
  std::string trials, k, seed, metrics, out, summary, format, threads, max_entries;
};

void forward(bench::ConfigBuilder& builder, const CLI::App& cmd, const char* flag, const char* key,
             const std::string& value) {
  if (cmd.count(flag) > 0) builder.set(key, {value});
}

int run_command(const CLI::App& cmd, const RunFlags& f) {
  bench::ConfigBuilder builder;
  if (!f.config.empty()) builder.apply(bench::load_config_file(f.config));
  if (!f.algos.empty()) builder.set("algo", f.algos);
  if (!f.ells.empty()) builder.set("ell", f.ells);
  forward(builder, cmd, "--dataset", "dataset", f.dataset);
  forward(builder, cmd, "--trials", "trials", f.trials);
  forward(builder, cmd, "--k", "k", f.k);
  forward(builder, cmd, "--seed", "seed", f.seed);
  forward(builder, cmd, "--metrics", "metrics", f.metrics);
  forward(builder, cmd, "--out", "out", f.out);
  forward(builder, cmd, "--summary", "summary", f.summary);
  forward(builder, cmd, "--format", "format", f.format);
  forward(builder, cmd, "--threads", "threads", f.threads);
  forward(builder, cmd, "--max-entries", "max_entries", f.max_entries);

  bench::ExperimentConfig cfg = builder.build();
  if (cfg.algorithms.empty()) throw std::invalid_argument("no algorithms configured (use --algo)");
  cfg.warn = [](const std::string& msg) { std::cerr << "sketchbench: warning: " << msg << '\n'; };

  const auto reports = bench::run_experiment(cfg);
  const auto summaries = bench::summarize(reports);
  const bench::ReportMeta meta{cfg.master_seed, sb::datasets::to_string(cfg.dataset), cfg.k_proj};
  bench::emit_report(reports, summaries, cfg.format, cfg.out, cfg.summary_out, meta);
  return 0;
}

int stats_command(const std::string& spec, std::uint64_t seed) {
  const auto ds = sb::datasets::parse_dataset_spec(spec, seed);
  const auto a = sb::datasets::materialize(ds);
  const auto s = sb::datasets::dataset_stats(a);
  std::cout << "dataset," << sb::datasets::to_string(ds) << '\n'
            << "n," << s.n << '\n'
            << "d," << s.d << '\n'
            << "rank," << s.rank << '\n'
            << std::setprecision(6) << "numeric_rank," << s.numeric_rank << '\n'
            << "nnz_pct," << s.nnz_pct << '\n'
            << "excess_kurtosis," << s.excess_kurtosis << '\n';
  return 0;
}

int generate_command(const std::string& spec, std::uint64_t seed, const std::string& out, const std::string& format) {
  const auto ds = sb::datasets::parse_dataset_spec(spec, seed);
  sb::datasets::save_matrix(sb::datasets::materialize(ds), out, sb::datasets::parse_file_format(format));
  return 0;
}

int list_command() {
  for (const auto& info : bench::algorithm_catalog()) {
    std::cout << std::left << std::setw(14) << info.name << (info.deterministic ? "det   " : "rand  ")
              << (info.streaming ? "stream  " : "bulk    ") << info.description << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming matrix sketching benchmark"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Run a sketching experiment");
  run->add_option("--config", rf.config, "Config file (flat TOML); flags override it")->check(CLI::ExistingFile);
  run->add_option("--algo", rf.algos, "Algorithm name[:param=val,...] (repeatable)");
  run->add_option("--dataset", rf.dataset, "Dataset spec, e.g. random_noisy:n=1000,d=100");
  run->add_option("--ell", rf.ells, "Sketch sizes, comma separated or repeated");
  run->add_option("--trials", rf.trials, "Trials per (algorithm, ell)");
  run->add_option("--k", rf.k, "Rank for proj_err");
  run->add_option("--seed", rf.seed, "Master seed");
  run->add_option("--metrics", rf.metrics, "Subset of cov,proj,time");
  run->add_option("--out", rf.out, "Output path (standard output when omitted)");
  run->add_option("--summary", rf.summary, "Summary CSV path");
  run->add_option("--format", rf.format, "csv or json");
  run->add_option("--threads", rf.threads, "Concurrent trials");
  run->add_option("--max-entries", rf.max_entries, "Refuse datasets with more than n*d entries");

  std::string ds_spec, gen_out, gen_format = "dense-csv";
  std::uint64_t ds_seed = 0;
  auto* stats = app.add_subcommand("stats", "Print dataset statistics");
  stats->add_option("--dataset", ds_spec, "Dataset spec")->required();
  stats->add_option("--seed", ds_seed, "Seed used when the spec has none");

  auto* generate = app.add_subcommand("generate", "Write a dataset to a file");
  generate->add_option("--dataset", ds_spec, "Dataset spec")->required();
  generate->add_option("--seed", ds_seed, "Seed used when the spec has none");
  generate->add_option("--out", gen_out, "Output path")->required();
  generate->add_option("--format", gen_format, "dense-csv or matrix-market");

  auto* list = app.add_subcommand("list", "List available algorithms");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(*run, rf);
    if (stats->parsed()) return stats_command(ds_spec, ds_seed);
    if (generate->parsed()) return generate_command(ds_spec, ds_seed, gen_out, gen_format);
    if (list->parsed()) return list_command();
  } catch (const std::exception& e) {
    std::cerr << "sketchbench: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
