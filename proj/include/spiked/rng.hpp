#pragma once

#include <cstdint>
#include <random>

namespace spiked {

/// Reproducible random source identifier.
///
/// A (seed, stream) pair names one independent random stream. Streams are
/// split deterministically with `substream`, so every sample drawn in the
/// library is a pure function of the pair and never of thread scheduling.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  // Fixed stream offsets used throughout the library.
  static constexpr std::uint64_t kSpikeStream = 0;
  static constexpr std::uint64_t kNoiseStream = 1;
  static constexpr std::uint64_t kFirstTrialStream = 2;

  /// Derive the child stream `index` of this stream.
  [[nodiscard]] RngSeed substream(std::uint64_t index) const noexcept;

  /// Child stream for Monte Carlo trial `k` (offset 2 + k).
  [[nodiscard]] RngSeed trial(std::uint64_t k) const noexcept {
    return substream(kFirstTrialStream + k);
  }

  [[nodiscard]] std::mt19937_64 engine() const noexcept;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

namespace detail {

// SplitMix64 finalizer, used as a 64-bit mixing hash.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

inline RngSeed RngSeed::substream(std::uint64_t index) const noexcept {
  return RngSeed{detail::mix64(seed ^ detail::mix64(stream + 0x632be59bd9b4e019ULL)), index};
}

inline std::mt19937_64 RngSeed::engine() const noexcept {
  return std::mt19937_64(detail::mix64(detail::mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL)));
}

}  // namespace spiked
