#pragma once

#include <cstdint>

namespace wnl {

/// splitmix64: the single documented generator behind every random draw.
/// Update formula (64-bit wrapping arithmetic):
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
/// Substreams are derived by mixing a stream id into the seed once, so
/// concurrent consumers (e.g. the noisy probe and its linear reference)
/// draw from disjoint deterministic sequences.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 substream(std::uint64_t seed, std::uint64_t stream_id) {
    SplitMix64 g(seed);
    return SplitMix64(g.next() ^ (0xD1B54A32D192ED03ULL * (stream_id + 1)));
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [-1, 1).
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

private:
  std::uint64_t state_;
};

}  // namespace wnl
