#pragma once

#include <cstdint>

namespace nlrm {

/**
 * Counter-based generator built on the SplitMix64 finalizer.
 *
 * Value number i of a stream is mix(key + (i + 1) * 0x9E3779B97F4A7C15),
 * where key = mix(seed ^ mix(stream_id)). Because every draw is a pure
 * function of (seed, stream_id, i) the sequence is identical on every
 * platform and can be reproduced from any language with 64-bit unsigned
 * wrap-around arithmetic. uniform() maps the top 53 bits to [0, 1).
 */
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr explicit CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : key_(mix(seed ^ mix(stream_id))) {}

  /// Raw 64-bit value at position `counter`.
  constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix(key_ + (counter + 1) * kGolden);
  }

  /// Uniform double in [0, 1) at position `counter`.
  constexpr double uniform_at(std::uint64_t counter) const noexcept {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }

  /// Sequential draw; advances the internal counter.
  constexpr std::uint64_t next() noexcept { return at(counter_++); }
  constexpr double uniform() noexcept { return uniform_at(counter_++); }

  constexpr std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace nlrm
