#pragma once

#include <cstdint>

namespace dcpower::netsim {

/// SplitMix64 (Steele, Lea & Flood 2014). A 64-bit Weyl counter pushed through
/// a fixed mixing function, so any (seed, trial, user) triple maps to its own
/// reproducible stream in every language that has 64-bit unsigned wraparound.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Stream start for one user's spreading sequence in one trial. Independent
/// of K and of the order users are generated in.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial,
                                 std::uint64_t user) noexcept {
  std::uint64_t s = SplitMix64::mix(seed ^ 0x243F6A8885A308D3ULL);
  s = SplitMix64::mix(s ^ (trial + 0x13198A2E03707344ULL));
  return SplitMix64::mix(s ^ (user + 0xA4093822299F31D0ULL));
}

}  // namespace dcpower::netsim
