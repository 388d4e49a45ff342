// Counter-based pseudo-randomness.
//
// Every uniform draw is a pure function of (stream key, counter): the key is
// derived from the global seed and a chain of indices (match, replication)
// by the SplitMix64 finalizer, and the draw itself is the SplitMix64 output
// for key + counter * golden-gamma. Results therefore do not depend on the
// order in which streams are consumed or on how work is split across
// threads, and they are bit-identical on any platform with IEEE doubles.
#pragma once

#include <cstdint>

namespace sk {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  constexpr explicit RngStream(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t key() const noexcept { return key_; }

  constexpr RngStream substream(std::uint64_t index) const noexcept {
    return RngStream(mix64(key_ ^ mix64(index + kGoldenGamma)));
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGoldenGamma);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

/// Global seed plus the per-match derivation rule:
/// stream(i) = RngStream(mix64(seed)).substream(i).
struct RngSeedPolicy {
  std::uint64_t global_seed = 0;

  RngStream root() const noexcept { return RngStream(mix64(global_seed)); }
  RngStream match_stream(std::uint64_t match_index) const noexcept {
    return root().substream(match_index);
  }
};

}  // namespace sk
