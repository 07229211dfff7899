#pragma once

#include <random>

#include "probeattack/common.hpp"

namespace probeattack {

/// Deterministic pseudo-random stream. std::mt19937_64 has a fully specified
/// output sequence, so raw draws are reproducible everywhere; the bounded and
/// real-valued draws below are hand-rolled because the standard library
/// distributions are implementation-defined and would break cross-platform
/// reproducibility.
class Rng {
 public:
  explicit Rng(u64 seed) : engine_(seed) {}

  /// Next raw 64-bit word.
  u64 next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be nonzero.
  /// Rejection sampling, so there is no modulo bias.
  u64 uniform(u64 bound) {
    const u64 threshold = (~bound + 1) % bound;  // 2^64 mod bound
    for (;;) {
      const u64 x = next();
      if (x >= threshold) return x % bound;
    }
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace probeattack
