#include "sketchbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "sketchbench/random.hpp"
#include "spec_string.hpp"

namespace sketchbench::bench {
namespace {

struct Task {
  std::size_t algorithm;
  Index ell;
  Index trial;
};

void warn(const ExperimentConfig& cfg, const std::string& message) {
  if (cfg.warn) {
    cfg.warn(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

bool report_order(const ErrorReport& a, const ErrorReport& b) {
  if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
  if (a.ell != b.ell) return a.ell < b.ell;
  return a.trial < b.trial;
}

}  // namespace

MetricSet parse_metrics(std::string_view list) {
  MetricSet m{false, false, false};
  std::string_view rest = list;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item = detail::trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    if (item == "cov") m.cov = true;
    else if (item == "proj") m.proj = true;
    else if (item == "time") m.time = true;
    else throw std::invalid_argument("unknown metric '" + item + "' (expected cov, proj, time)");
  }
  if (!m.cov && !m.proj && !m.time) throw std::invalid_argument("no metrics selected");
  return m;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.algorithms.empty()) throw std::invalid_argument("no algorithms configured");
  if (cfg.ells.empty()) throw std::invalid_argument("no sketch sizes configured");
  for (Index ell : cfg.ells) {
    if (ell < 2) throw std::invalid_argument("sketch size " + std::to_string(ell) + " is below 2");
  }
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.k_proj < 1) throw std::invalid_argument("k must be >= 1");
  if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (cfg.max_entries < 1) throw std::invalid_argument("entry budget must be >= 1");
  for (const AlgorithmSpec& a : cfg.algorithms) algorithm_info(a.name);
}

std::uint64_t trial_seed(std::uint64_t master_seed, const std::string& label, Index ell, Index trial) {
  return mix_seed({master_seed, hash_name(label), static_cast<std::uint64_t>(ell), static_cast<std::uint64_t>(trial)});
}

std::vector<ErrorReport> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const RowMatrix a = datasets::materialize(cfg.dataset);
  return run_experiment(cfg, a);
}

std::vector<ErrorReport> run_experiment(const ExperimentConfig& cfg, const RowMatrix& a) {
  validate(cfg);
  const double entries = static_cast<double>(a.rows()) * static_cast<double>(a.cols());
  if (entries > static_cast<double>(cfg.max_entries)) {
    throw std::invalid_argument("input has " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " entries, above the budget of " + std::to_string(cfg.max_entries));
  }
  for (Index ell : cfg.ells) {
    if (ell > a.rows()) {
      warn(cfg, "ell=" + std::to_string(ell) + " exceeds n=" + std::to_string(a.rows()) + "; sketches are lossless");
    }
  }

  std::optional<metrics::Evaluator> evaluator;
  if (cfg.metrics.cov || cfg.metrics.proj) evaluator.emplace(a, cfg.metrics.proj);

  std::vector<Task> tasks;
  for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
    for (Index ell : cfg.ells) {
      for (Index t = 0; t < cfg.trials; ++t) tasks.push_back({i, ell, t});
    }
  }
  std::vector<ErrorReport> reports(tasks.size());

  auto run_task = [&](const Task& task) {
    const AlgorithmSpec& spec = cfg.algorithms[task.algorithm];
    ErrorReport r;
    r.algorithm = spec.label();
    r.ell = task.ell;
    r.trial = task.trial;
    r.seed = trial_seed(cfg.master_seed, r.algorithm, task.ell, task.trial);
    r.streaming = algorithm_info(spec.name).streaming;
    std::unique_ptr<Sketcher> sketcher = make_sketcher(spec, task.ell, a.cols(), r.seed);
    const auto start = std::chrono::steady_clock::now();
    const Matrix b = sketcher->sketch(a);
    const auto stop = std::chrono::steady_clock::now();
    if (cfg.metrics.time) r.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
    if (cfg.metrics.cov) r.cov_err = evaluator->cov_err(b);
    if (cfg.metrics.proj) {
      try {
        const metrics::ProjErr p = evaluator->proj_err(b, cfg.k_proj);
        r.proj_err = p.value;
        r.proj_rank_deficient = p.rank_deficient;
      } catch (const metrics::ExactApproximation&) {
        r.proj_exact = true;
      }
    }
    return r;
  };

  const auto workers = static_cast<std::size_t>(std::min<Index>(cfg.threads, static_cast<Index>(tasks.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) reports[i] = run_task(tasks[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
              reports[i] = run_task(tasks[i]);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
              next = tasks.size();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  std::stable_sort(reports.begin(), reports.end(), report_order);
  return reports;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  const auto mid = static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  return values[static_cast<std::size_t>(mid)];
}

std::vector<Summary> summarize(const std::vector<ErrorReport>& reports) {
  std::map<std::pair<std::string, Index>, std::vector<const ErrorReport*>> groups;
  for (const ErrorReport& r : reports) groups[{r.algorithm, r.ell}].push_back(&r);
  std::vector<Summary> out;
  for (const auto& [key, group] : groups) {
    Summary s;
    s.algorithm = key.first;
    s.ell = key.second;
    s.trials = static_cast<Index>(group.size());
    std::vector<double> cov, proj, wall;
    for (const ErrorReport* r : group) {
      if (r->cov_err) cov.push_back(*r->cov_err);
      if (r->proj_err) proj.push_back(*r->proj_err);
      if (r->proj_exact) s.proj_exact = true;
      if (r->wall_ns) wall.push_back(static_cast<double>(*r->wall_ns));
    }
    if (!cov.empty()) s.cov_err_med = lower_median(cov);
    if (!proj.empty() && !s.proj_exact) s.proj_err_med = lower_median(proj);
    if (!wall.empty()) s.wall_ns_med = static_cast<std::int64_t>(lower_median(wall));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sketchbench::bench
