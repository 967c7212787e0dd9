#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sketchbench/harness.hpp"

namespace sketchbench::bench {

inline constexpr const char* kReportHeader = "algo,ell,trial,seed,cov_err,proj_err,wall_ns";
inline constexpr const char* kSummaryHeader = "algo,ell,cov_err_med,proj_err_med,wall_ns_med";

struct ReportMeta {
  std::uint64_t master_seed = 0;
  std::string dataset;
  Index k_proj = 10;
};

// Absent values are empty fields; an exactly low-rank input yields proj_err "exact".
void write_reports_csv(const std::vector<ErrorReport>& reports, std::ostream& out);
void write_summary_csv(const std::vector<Summary>& summaries, std::ostream& out);
std::vector<ErrorReport> read_reports_csv(std::istream& in);

std::string reports_json(const std::vector<ErrorReport>& reports, const std::vector<Summary>& summaries,
                         const ReportMeta& meta);

// "runs.csv" -> "runs.summary.csv"
std::string summary_path_for(const std::string& out);

// csv: trial records to path, medians to summary_path (derived when empty).
// json: one document with both. An empty path writes to standard output.
void emit_report(const std::vector<ErrorReport>& reports, const std::vector<Summary>& summaries, Format format,
                 const std::string& path, const std::string& summary_path, const ReportMeta& meta);

}  // namespace sketchbench::bench
