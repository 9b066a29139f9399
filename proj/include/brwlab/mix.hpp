#pragma once

#include <cstdint>

namespace brwlab {

// SplitMix64 output function (Steele, Lea & Flood). Every piece of randomness
// in the library is derived from counters passed through this function, so
// results never depend on traversal order or thread scheduling.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Top 53 bits mapped to the open interval (0, 1): ((h >> 11) + 0.5) / 2^53.
constexpr double to_unit(std::uint64_t h) noexcept {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Combine three words into one key; used for per-trial seeds.
constexpr std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return mix64(mix64(mix64(a) ^ b) ^ c);
}

}  // namespace brwlab
