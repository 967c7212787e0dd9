#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace sketchbench {

using Rng = std::mt19937_64;

inline constexpr std::string_view kGeneratorName = "mt19937_64/splitmix64";

// splitmix64 finalizer
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

// 64-bit FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t hash_name(std::string_view name);

Rng make_rng(std::uint64_t seed);

// Uniform on the open interval (0, 1).
double uniform_open01(Rng& rng);

}  // namespace sketchbench
