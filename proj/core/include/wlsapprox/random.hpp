#pragma once

#include <cstdint>
#include <random>

namespace wlsapprox {

/// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seeded random stream backed by std::mt19937_64.
///
/// Uniform doubles are formed from the top 53 bits of each engine word, so a
/// given seed yields the same sequence on every conforming standard library.
/// Sub-streams for parallel replications come from `substream(r)`, whose seed
/// is `mix64(seed ^ mix64(r + 0x9e3779b97f4a7c15))`.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Standard normal via Box-Muller on two uniforms.
  double normal() noexcept;

  std::uint64_t next_word() noexcept { return engine_(); }

  RandomStream substream(std::uint64_t index) const noexcept {
    return RandomStream(substream_seed(seed_, index));
  }

  static std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return mix64(base ^ mix64(index + 0x9e3779b97f4a7c15ULL));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace wlsapprox
