#include "spec_string.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace sketchbench::detail {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

SpecString split_spec(std::string_view text) {
  SpecString out;
  const auto colon = text.find(':');
  out.head = trim(text.substr(0, colon));
  if (out.head.empty()) throw std::invalid_argument("empty name in '" + std::string(text) + "'");
  if (colon == std::string_view::npos) return out;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("expected key=value, got '" + item + "' in '" + std::string(text) + "'");
    }
    out.params.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("parameter " + key + ": '" + value + "' is not a number");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long v = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("parameter " + key + ": '" + value + "' is not an integer");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw std::invalid_argument("parameter " + key + ": '" + value + "' is not a boolean");
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

}  // namespace sketchbench::detail
