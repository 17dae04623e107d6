#pragma once

#include <cstdint>
#include <random>

namespace yembed {

// Deterministic RNG: thin wrapper over mt19937_64 with the two draws the
// trainer needs. Same seed, same binary -> same stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0; modulo bias is negligible for
  // the small bounds used here.
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

  // Uniform in [0, 1).
  double real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace yembed
