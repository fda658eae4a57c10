// Counter-based random streams.
//
// Nothing here holds state: a draw is a pure function of (seed, counter), so
// coordinate i of a sampled point and sample s of a campaign can be produced
// in any order, on any thread, with identical results.
//
// Splitting rule:
//   coordinate stream   u(seed, i)  = unit(mix(mix(seed ^ kCoordinateTag) + i))
//   sample substream    seed(s)     = mix(mix(master ^ kSampleTag) + s)
// where mix is the SplitMix64 finalizer.
#pragma once

#include <cstdint>

namespace infprod::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kCoordinateTag = 0x636f6f7264696e61ULL;  // "coordina"
inline constexpr std::uint64_t kSampleTag = 0x73616d706c657321ULL;      // "samples!"

constexpr std::uint64_t mix(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double coordinate_uniform(std::uint64_t seed, std::uint64_t index) {
  return unit(mix(mix(seed ^ kCoordinateTag) + index));
}

constexpr std::uint64_t substream(std::uint64_t master, std::uint64_t sample_index) {
  return mix(mix(master ^ kSampleTag) + sample_index);
}

}  // namespace infprod::rng
