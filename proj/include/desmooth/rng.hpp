#pragma once

#include <cstdint>

namespace desmooth {

// Counter-based deterministic generator (SplitMix64 stream with a Stafford
// mix13 finalizer). Identical seeds give identical draw sequences on every
// platform, and independent child streams can be derived from (seed, index)
// without touching the parent's counter, which is what per-context parallel
// sampling needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    counter_ += kGolden;
    return mix(seed_ + counter_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Requires n >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(next_double() * static_cast<double>(n)) % n;
  }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  std::uint64_t seed() const { return seed_; }

  // Independent stream for work unit `index`. Depends only on the seed, not
  // on how many draws the parent has made.
  Rng child(std::uint64_t index) const { return Rng(mix(seed_ ^ mix(index + kGolden))); }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace desmooth
