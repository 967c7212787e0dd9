#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sketchbench::detail {

struct SpecString {
  std::string head;
  std::vector<std::pair<std::string, std::string>> params;
};

// "head:key=val,key=val"
SpecString split_spec(std::string_view text);

std::string trim(std::string_view s);
double to_double(const std::string& key, const std::string& value);
long long to_integer(const std::string& key, const std::string& value);
bool to_bool(const std::string& key, const std::string& value);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace sketchbench::detail
