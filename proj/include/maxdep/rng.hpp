#pragma once

// Portable random streams.
//
// Every stream is a std::mt19937_64 whose 64-bit seed is derived from a master
// seed and a stream index by one SplitMix64 finalizer step:
//
//   stream_seed(master, i) = splitmix64(master + (i + 1) * 0x9E3779B97F4A7C15)
//
// Simulation uses one stream per output row and the bootstrap one stream per
// replicate, so results never depend on evaluation order. Real variates are
// produced from raw 64-bit words by the fixed conversions below (the standard
// library distributions are implementation-defined and are not used).

#include <cmath>
#include <cstdint>
#include <random>

namespace maxdep::rng {

using Engine = std::mt19937_64;

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master + (index + 1) * kGoldenGamma);
}

inline Engine make_stream(std::uint64_t master, std::uint64_t index) {
  return Engine(stream_seed(master, index));
}

/// Uniform on the open interval (0, 1): 53 random bits, offset by half a step.
inline double uniform_open(Engine& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard exponential by inversion.
inline double exponential(Engine& eng) { return -std::log(uniform_open(eng)); }

/// Unbiased integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace maxdep::rng
