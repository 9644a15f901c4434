#pragma once

#include <cstdint>
#include <random>

namespace rwmm {

using Rng = std::mt19937_64;

/// Independent sub-streams derived from one run seed.
enum class Stream : std::uint64_t {
  kWaypoints = 1,
  kPaths = 2,
  kContinuous = 3,
  kRun = 4,
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Mixes (seed, stream, index) into a well-separated 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  return Rng{derive_seed(seed, stream, index)};
}

}  // namespace rwmm
