#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace eventaug {

/// splitmix64 finalizer; a bijection on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Sub-seed for an integer key (slice index, op id). Pure, so results do not
/// depend on the order work items are processed in.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) noexcept {
  return mix64(master ^ mix64(key));
}

/// Sub-seed for a string key, e.g. a dataset-relative path.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key) noexcept;

/// Engine used for every random draw in the library. mt19937_64's output
/// sequence is fixed by the standard, which keeps results portable.
using Engine = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Engine &engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

} // namespace eventaug
