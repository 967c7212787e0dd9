#include "sketchbench/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "sketchbench/iterative.hpp"
#include "sketchbench/projection.hpp"
#include "sketchbench/sampling.hpp"
#include "spec_string.hpp"

namespace sketchbench::bench {
namespace {

struct ParamRule {
  std::string key;
  std::optional<double> fallback;
  bool integer;
  double lo;
  double hi;
  bool lo_open;
};

struct Entry {
  AlgorithmInfo info;
  std::vector<ParamRule> params;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"isvd", "incremental SVD: zero the smallest singular value", true, true, 2}, {}},
      {{"fd", "Frequent Directions", true, true, 2}, {}},
      {{"alpha-fd", "parameterized FD shrinking the last alpha*ell values", true, true, 2},
       {{"alpha", 0.2, false, 0.0, 1.0, true}}},
      {{"fast-fd", "Fast FD: shrink by the median squared value", true, true, 2}, {}},
      {{"fast-alpha-fd", "Fast parameterized FD", true, true, 2}, {{"alpha", 0.2, false, 0.0, 1.0, true}}},
      {{"ssd", "SpaceSaving Directions", true, true, 2}, {}},
      {{"cfd", "Compensative FD", true, true, 2}, {}},
      {{"norm", "norm sampling with replacement", false, true, 1}, {}},
      {{"leverage", "leverage score sampling (two pass)", false, false, 1}, {{"k", 10.0, true, 1.0, 1e18, false}}},
      {{"det-leverage", "deterministic leverage: top scores (two pass)", true, false, 1},
       {{"k", 10.0, true, 1.0, 1e18, false}}},
      {{"priority", "priority sampling without replacement", false, true, 1}, {}},
      {{"varopt", "VarOpt sampling without replacement", false, true, 1}, {}},
      {{"rp", "dense random sign projection", false, true, 1}, {}},
      {{"fjlt", "fast Johnson-Lindenstrauss transform (bulk)", false, false, 1},
       {{"q", std::nullopt, false, 0.0, 1.0, true}}},
      {{"hash", "count-sketch hashing", false, true, 1}, {}},
      {{"osnap", "OSNAP: s stacked count sketches", false, true, 1}, {{"s", 4.0, true, 1.0, 1e9, false}}},
  };
  return entries;
}

std::string canonical_name(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (name == "sign") return "rp";
  if (name == "iterative-svd") return "isvd";
  if (name == "ss" || name == "spacesaving") return "ssd";
  return name;
}

const Entry& find_entry(std::string_view name) {
  const std::string canon = canonical_name(std::string(name));
  for (const Entry& e : registry()) {
    if (e.info.name == canon) return e;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

template <class State>
class Streaming final : public Sketcher {
 public:
  explicit Streaming(State state) : state_(std::move(state)) {}
  Matrix sketch(const RowMatrix& a) override {
    for (Index i = 0; i < a.rows(); ++i) state_.update(a.row(i));
    return state_.finalize();
  }

 private:
  State state_;
};

template <class F>
class Bulk final : public Sketcher {
 public:
  explicit Bulk(F f) : f_(std::move(f)) {}
  Matrix sketch(const RowMatrix& a) override { return f_(a); }

 private:
  F f_;
};

template <class State>
std::unique_ptr<Sketcher> streaming(State s) {
  return std::make_unique<Streaming<State>>(std::move(s));
}

template <class F>
std::unique_ptr<Sketcher> bulk(F f) {
  return std::make_unique<Bulk<F>>(std::move(f));
}

}  // namespace

std::string AlgorithmSpec::label() const {
  std::string out = name;
  for (std::size_t i = 0; i < params.size(); ++i) {
    out += i == 0 ? ':' : ',';
    out += params[i].first + "=" + detail::format_double(params[i].second);
  }
  return out;
}

bool AlgorithmSpec::has(std::string_view key) const {
  return std::any_of(params.begin(), params.end(), [&](const auto& p) { return p.first == key; });
}

double AlgorithmSpec::param(std::string_view key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  throw std::invalid_argument("algorithm " + name + " has no parameter '" + std::string(key) + "'");
}

const std::vector<AlgorithmInfo>& algorithm_catalog() {
  static const std::vector<AlgorithmInfo> infos = [] {
    std::vector<AlgorithmInfo> v;
    for (const Entry& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const AlgorithmInfo& algorithm_info(std::string_view name) { return find_entry(name).info; }

AlgorithmSpec parse_algorithm(std::string_view text) {
  const detail::SpecString s = detail::split_spec(text);
  const Entry& entry = find_entry(s.head);
  AlgorithmSpec spec;
  spec.name = entry.info.name;
  for (const auto& [key, value] : s.params) {
    const auto rule = std::find_if(entry.params.begin(), entry.params.end(), [&](const ParamRule& r) { return r.key == key; });
    if (rule == entry.params.end()) {
      throw std::invalid_argument("algorithm " + spec.name + " has no parameter '" + key + "'");
    }
    if (spec.has(key)) throw std::invalid_argument("parameter '" + key + "' given twice");
    const double v = rule->integer ? static_cast<double>(detail::to_integer(key, value)) : detail::to_double(key, value);
    const bool low_ok = rule->lo_open ? v > rule->lo : v >= rule->lo;
    if (!low_ok || v > rule->hi) {
      throw std::invalid_argument("parameter " + key + "=" + value + " out of range for " + spec.name);
    }
    spec.params.emplace_back(key, v);
  }
  for (const ParamRule& r : entry.params) {
    if (!spec.has(r.key) && r.fallback) spec.params.emplace_back(r.key, *r.fallback);
  }
  std::sort(spec.params.begin(), spec.params.end());
  return spec;
}

std::unique_ptr<Sketcher> make_sketcher(const AlgorithmSpec& spec, Index ell, Index dim, std::uint64_t seed) {
  using iterative::IterativeSketch;
  using iterative::Variant;
  const AlgorithmInfo& info = algorithm_info(spec.name);
  if (ell < info.min_ell) {
    throw std::invalid_argument(spec.name + " needs ell >= " + std::to_string(info.min_ell));
  }
  const std::string& n = info.name;
  if (n == "isvd") return streaming(IterativeSketch(Variant::isvd, ell, dim));
  if (n == "fd") return streaming(IterativeSketch(Variant::pfd, ell, dim, 1.0));
  if (n == "alpha-fd") return streaming(IterativeSketch(Variant::pfd, ell, dim, spec.param("alpha")));
  if (n == "fast-fd") return streaming(IterativeSketch(Variant::fast_pfd, ell, dim, 1.0));
  if (n == "fast-alpha-fd") return streaming(IterativeSketch(Variant::fast_pfd, ell, dim, spec.param("alpha")));
  if (n == "ssd") return streaming(IterativeSketch(Variant::ss, ell, dim));
  if (n == "cfd") return streaming(IterativeSketch(Variant::cfd, ell, dim, 1.0));
  if (n == "norm") return streaming(sampling::NormSampler(ell, dim, seed));
  if (n == "priority") return streaming(sampling::PrioritySampler(ell, dim, seed));
  if (n == "varopt") return streaming(sampling::VarOptSampler(ell, dim, seed));
  if (n == "rp") return streaming(projection::ProjectionSketch::sign(ell, dim, seed));
  if (n == "hash") return streaming(projection::ProjectionSketch::hash(ell, dim, seed));
  if (n == "osnap") {
    return streaming(projection::ProjectionSketch::osnap(ell, dim, static_cast<Index>(spec.param("s")), seed));
  }
  if (n == "leverage") {
    const auto k = static_cast<Index>(spec.param("k"));
    return bulk([=](const RowMatrix& a) { return sampling::leverage_sample(a, ell, k, seed); });
  }
  if (n == "det-leverage") {
    const auto k = static_cast<Index>(spec.param("k"));
    return bulk([=](const RowMatrix& a) { return sampling::deterministic_leverage(a, ell, k); });
  }
  if (n == "fjlt") {
    const std::optional<double> q = spec.has("q") ? std::optional<double>(spec.param("q")) : std::nullopt;
    return bulk([=](const RowMatrix& a) { return projection::fjlt_sketch(a, ell, seed, q); });
  }
  throw std::logic_error("no factory for algorithm " + n);
}

}  // namespace sketchbench::bench
