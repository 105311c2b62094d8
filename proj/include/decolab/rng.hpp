#pragma once

// Reproducible random streams.
//
// Generator: SplitMix64 (Steele, Lea & Flood 2014). A stream is keyed by a
// 64-bit seed and a 64-bit counter (e.g. a run index); the starting state is
// mix(seed ^ mix(counter + golden)), so streams for different counters are
// decorrelated and any run can be regenerated without replaying the others.
// Uniform doubles use the top 53 bits, which keeps every emitted value
// bit-identical across platforms and standard libraries.

#include <cstddef>
#include <cstdint>
#include <span>

namespace decolab {

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  /// Independent substream `counter` of the generator keyed by `seed`.
  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t counter) noexcept {
    return SplitMix64(seed ^ mix(counter + kGolden));
  }

  constexpr std::uint64_t next() noexcept { return mix(state_ += kGolden); }

  /// Uniform in [0, 1).
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

/// Index n with cumulative(n-1) <= u * total < cumulative(n) for weights w.
/// Zero-weight entries are never returned.
std::size_t sample_index(std::span<const double> weights, double u);

}  // namespace decolab
