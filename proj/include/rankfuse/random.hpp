#pragma once

// Seeded randomness with a standard-specified engine, so sampled artifacts
// are reproducible across platforms. Doubles are drawn from the raw 64-bit
// output rather than std::uniform_real_distribution, whose mapping is
// implementation-defined.

#include <cstdint>
#include <random>
#include <string_view>

namespace rankfuse {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double next_double() { return (engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Recorded in result provenance.
  static constexpr std::string_view generator_name() { return "mt19937_64"; }

 private:
  std::mt19937_64 engine_;
};

/// Stable per-stream seed derivation (splitmix64 of seed xor stream).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rankfuse
