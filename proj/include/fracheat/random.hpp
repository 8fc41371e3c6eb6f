// Counter-based random streams: one independent stream per (seed, index), so
// results never depend on how work is split across threads.
#pragma once

#include <cstdint>
#include <limits>

namespace fracheat {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Satisfies UniformRandomBitGenerator; output k of stream (seed, index) is a
/// hash of (key, k).
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t index) noexcept
      : key_(splitmix64(seed ^ splitmix64(index ^ 0xD1B54A32D192ED03ull))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return splitmix64(key_ + 0x9E3779B97F4A7C15ull * counter_++); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace fracheat
