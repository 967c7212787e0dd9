#include "sketchbench/report.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sketchbench/random.hpp"
#include "spec_string.hpp"

namespace sketchbench::bench {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt(const std::optional<double>& v) { return v ? detail::format_double(*v) : std::string(); }

std::string opt(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string(); }

std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw std::runtime_error("line " + std::to_string(lineno) + ": unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

template <class T>
T parse_field(const std::string& s, const char* what, std::size_t lineno) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("line " + std::to_string(lineno) + ": bad " + what + " '" + s + "'");
  }
  return v;
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json opt_json(const std::optional<std::int64_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

void finish(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

void write_reports_csv(const std::vector<ErrorReport>& reports, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const ErrorReport& r : reports) {
    out << csv_field(r.algorithm) << ',' << r.ell << ',' << r.trial << ',' << r.seed << ',' << opt(r.cov_err) << ','
        << (r.proj_exact ? std::string("exact") : opt(r.proj_err)) << ',' << opt(r.wall_ns) << '\n';
  }
}

void write_summary_csv(const std::vector<Summary>& summaries, std::ostream& out) {
  out << kSummaryHeader << '\n';
  for (const Summary& s : summaries) {
    out << csv_field(s.algorithm) << ',' << s.ell << ',' << opt(s.cov_err_med) << ','
        << (s.proj_exact ? std::string("exact") : opt(s.proj_err_med)) << ',' << opt(s.wall_ns_med) << '\n';
  }
}

std::vector<ErrorReport> read_reports_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty report file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kReportHeader) throw std::runtime_error("line 1: unexpected header '" + line + "'");
  std::vector<ErrorReport> out;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line, lineno);
    if (f.size() != 7) throw std::runtime_error("line " + std::to_string(lineno) + ": expected 7 fields");
    ErrorReport r;
    r.algorithm = f[0];
    r.ell = parse_field<Index>(f[1], "ell", lineno);
    r.trial = parse_field<Index>(f[2], "trial", lineno);
    r.seed = parse_field<std::uint64_t>(f[3], "seed", lineno);
    if (!f[4].empty()) r.cov_err = parse_field<double>(f[4], "cov_err", lineno);
    if (f[5] == "exact") {
      r.proj_exact = true;
    } else if (!f[5].empty()) {
      r.proj_err = parse_field<double>(f[5], "proj_err", lineno);
    }
    if (!f[6].empty()) r.wall_ns = parse_field<std::int64_t>(f[6], "wall_ns", lineno);
    out.push_back(std::move(r));
  }
  return out;
}

std::string reports_json(const std::vector<ErrorReport>& reports, const std::vector<Summary>& summaries,
                         const ReportMeta& meta) {
  nlohmann::ordered_json doc;
  doc["generator"] = std::string(kGeneratorName);
  doc["master_seed"] = meta.master_seed;
  doc["dataset"] = meta.dataset;
  doc["k"] = meta.k_proj;
  doc["records"] = nlohmann::ordered_json::array();
  for (const ErrorReport& r : reports) {
    nlohmann::ordered_json j;
    j["algo"] = r.algorithm;
    j["ell"] = r.ell;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["cov_err"] = opt_json(r.cov_err);
    j["proj_err"] = r.proj_exact ? nlohmann::json("exact") : opt_json(r.proj_err);
    j["wall_ns"] = opt_json(r.wall_ns);
    j["proj_rank_deficient"] = r.proj_rank_deficient;
    j["streaming"] = r.streaming;
    j["generator"] = std::string(kGeneratorName);
    doc["records"].push_back(std::move(j));
  }
  doc["summary"] = nlohmann::ordered_json::array();
  for (const Summary& s : summaries) {
    nlohmann::ordered_json j;
    j["algo"] = s.algorithm;
    j["ell"] = s.ell;
    j["cov_err_med"] = opt_json(s.cov_err_med);
    j["proj_err_med"] = s.proj_exact ? nlohmann::json("exact") : opt_json(s.proj_err_med);
    j["wall_ns_med"] = opt_json(s.wall_ns_med);
    j["trials"] = s.trials;
    doc["summary"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string summary_path_for(const std::string& out) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + ".summary.csv";
  return out.substr(0, dot) + ".summary" + out.substr(dot);
}

void emit_report(const std::vector<ErrorReport>& reports, const std::vector<Summary>& summaries, Format format,
                 const std::string& path, const std::string& summary_path, const ReportMeta& meta) {
  if (format == Format::json) {
    const std::string doc = reports_json(reports, summaries, meta);
    if (path.empty()) {
      std::cout << doc;
      return;
    }
    std::ofstream f = open_out(path);
    f << doc;
    finish(f, path);
    return;
  }
  if (path.empty()) {
    write_reports_csv(reports, std::cout);
  } else {
    std::ofstream f = open_out(path);
    write_reports_csv(reports, f);
    finish(f, path);
  }
  const std::string spath = summary_path.empty() && !path.empty() ? summary_path_for(path) : summary_path;
  if (!spath.empty()) {
    std::ofstream f = open_out(spath);
    write_summary_csv(summaries, f);
    finish(f, spath);
  }
}

}  // namespace sketchbench::bench
