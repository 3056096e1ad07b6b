#pragma once

// Portable deterministic randomness. std::mt19937_64 has a fully specified
// output sequence; the standard distributions do not, so bounded draws and
// shuffles are implemented here to keep results identical across toolchains.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace tlselect::rng {

using Engine = std::mt19937_64;

/// Name written into manifests so other implementations can reproduce a shuffle.
inline constexpr const char* kGeneratorName = "mt19937_64+rejection+fisher-yates-descending";

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-variant seed: mix64(mix64(seed) ^ index). Independent of evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ index);
}

/// Uniform integer in [0, bound) by rejection sampling on raw 64-bit draws.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Largest multiple of bound representable in 64 bits, expressed as a threshold.
  const std::uint64_t threshold = (0 - bound) % bound;  // == 2^64 mod bound
  while (true) {
    const std::uint64_t x = eng();
    if (x >= threshold) return x % bound;
  }
}

/// Fisher-Yates, swapping position i (from n-1 down to 1) with a uniform j in [0, i].
template <typename T>
void shuffle(std::span<T> items, Engine& eng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(eng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace tlselect::rng
