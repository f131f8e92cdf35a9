#pragma once

#include <cstdint>
#include <random>

namespace rackmsr {

/// Deterministic RNG used everywhere randomness is needed.  Wraps mt19937_64
/// with a rejection-sampled bounded draw so that a given seed yields the same
/// stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform draw from [0, n).  n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rackmsr
