#include "sketchbench/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spec_string.hpp"

namespace sketchbench::bench {
namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw std::invalid_argument(source + ":" + std::to_string(line) + ": " + what);
}

bool bare_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote != 0) {
      if (c == '\\' && quote == '"') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

class ValueReader {
 public:
  ValueReader(std::string_view text, const std::string& source, std::size_t line)
      : text_(text), source_(source), line_(line) {}

  std::vector<std::string> read() {
    skip_space();
    std::vector<std::string> out;
    if (peek() == '[') {
      ++pos_;
      skip_space();
      while (peek() != ']') {
        out.push_back(scalar());
        skip_space();
        if (peek() == ',') {
          ++pos_;
          skip_space();
        } else if (peek() != ']') {
          fail(source_, line_, "expected ',' or ']' in array");
        }
      }
      ++pos_;
    } else {
      out.push_back(scalar());
    }
    skip_space();
    if (pos_ != text_.size()) fail(source_, line_, "unexpected text after value");
    return out;
  }

 private:
  char peek() const {
    if (pos_ >= text_.size()) fail(source_, line_, "unexpected end of value");
    return text_[pos_];
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string scalar() {
    const char c = peek();
    if (c == '[') fail(source_, line_, "nested arrays are not supported");
    if (c == '"' || c == '\'') {
      ++pos_;
      std::string s;
      while (true) {
        const char x = peek();
        ++pos_;
        if (x == c) break;
        if (x == '\\' && c == '"') {
          const char e = peek();
          ++pos_;
          switch (e) {
            case 'n': s += '\n'; break;
            case 't': s += '\t'; break;
            case '"': s += '"'; break;
            case '\\': s += '\\'; break;
            default: fail(source_, line_, std::string("unsupported escape \\") + e);
          }
        } else {
          s += x;
        }
      }
      return s;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    std::string s(text_.substr(start, pos_ - start));
    if (s.empty()) fail(source_, line_, "empty value");
    std::string digits;
    for (char x : s) {
      if (x != '_') digits += x;
    }
    return digits;
  }

  std::string_view text_;
  const std::string& source_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_list(const std::vector<std::string>& values) {
  std::vector<std::string> out;
  for (const std::string& v : values) {
    std::string_view rest(v);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string item = detail::trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      if (!item.empty()) out.push_back(std::move(item));
    }
  }
  return out;
}

const std::string& single(const std::string& key, const std::vector<std::string>& values) {
  if (values.size() != 1) throw std::invalid_argument("setting '" + key + "' takes one value");
  return values.front();
}

Index count_value(const std::string& key, const std::vector<std::string>& values) {
  return static_cast<Index>(detail::to_integer(key, single(key, values)));
}

}  // namespace

ConfigTable parse_config_text(std::string_view text, const std::string& source) {
  ConfigTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = detail::trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') fail(source, lineno, "tables are not supported; use top-level keys");
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(source, lineno, "expected 'key = value'");
    const std::string key = detail::trim(body.substr(0, eq));
    if (!bare_key(key)) fail(source, lineno, "invalid key '" + key + "'");
    std::string value = detail::trim(body.substr(eq + 1));
    const std::size_t start_line = lineno;
    if (!value.empty() && value.front() == '[') {
      // Arrays may continue over several lines until the closing bracket.
      auto balanced = [](const std::string& v) {
        int depth = 0;
        char quote = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
          const char c = v[i];
          if (quote != 0) {
            if (c == '\\' && quote == '"') ++i;
            else if (c == quote) quote = 0;
          } else if (c == '"' || c == '\'') {
            quote = c;
          } else if (c == '[') {
            ++depth;
          } else if (c == ']') {
            --depth;
          }
        }
        return depth <= 0;
      };
      while (!balanced(value)) {
        if (!std::getline(in, line)) fail(source, start_line, "unterminated array");
        ++lineno;
        value += " " + detail::trim(strip_comment(line));
      }
    }
    for (const auto& [k, v] : table) {
      if (k == key) fail(source, start_line, "duplicate key '" + key + "'");
    }
    table.emplace_back(key, ValueReader(value, source, start_line).read());
  }
  return table;
}

ConfigTable load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void ConfigBuilder::set(const std::string& key, const std::vector<std::string>& values) {
  if (key == "dataset") {
    dataset_ = single(key, values);
  } else if (key == "algo" || key == "algorithms" || key == "algorithm") {
    // Algorithm specs contain commas themselves, so lists are never comma-split here.
    algorithms_ = values;
  } else if (key == "ell" || key == "ells") {
    ells_.clear();
    for (const std::string& v : split_list(values)) ells_.push_back(static_cast<Index>(detail::to_integer(key, v)));
  } else if (key == "trials") {
    trials_ = count_value(key, values);
  } else if (key == "k") {
    k_ = count_value(key, values);
  } else if (key == "seed") {
    seed_ = static_cast<std::uint64_t>(detail::to_integer(key, single(key, values)));
  } else if (key == "metrics") {
    std::string joined;
    for (const std::string& m : split_list(values)) joined += (joined.empty() ? "" : ",") + m;
    metrics_ = joined;
  } else if (key == "out") {
    out_ = single(key, values);
  } else if (key == "summary") {
    summary_ = single(key, values);
  } else if (key == "format") {
    format_ = single(key, values);
  } else if (key == "threads") {
    threads_ = count_value(key, values);
  } else if (key == "max_entries" || key == "max-entries") {
    max_entries_ = static_cast<std::int64_t>(detail::to_integer(key, single(key, values)));
  } else {
    throw std::invalid_argument("unknown setting '" + key + "'");
  }
}

void ConfigBuilder::apply(const ConfigTable& table) {
  for (const auto& [key, values] : table) set(key, values);
}

ExperimentConfig ConfigBuilder::build() const {
  ExperimentConfig cfg;
  if (seed_) cfg.master_seed = *seed_;
  if (!dataset_) throw std::invalid_argument("no dataset configured");
  cfg.dataset = datasets::parse_dataset_spec(*dataset_, cfg.master_seed);
  for (const std::string& a : algorithms_) cfg.algorithms.push_back(parse_algorithm(a));
  cfg.ells = ells_;
  if (trials_) cfg.trials = *trials_;
  if (k_) cfg.k_proj = *k_;
  if (metrics_) cfg.metrics = parse_metrics(*metrics_);
  if (out_) cfg.out = *out_;
  if (summary_) cfg.summary_out = *summary_;
  if (format_) cfg.format = parse_format(*format_);
  if (threads_) cfg.threads = *threads_;
  if (max_entries_) cfg.max_entries = *max_entries_;
  validate(cfg);
  return cfg;
}

}  // namespace sketchbench::bench
