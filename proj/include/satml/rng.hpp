#pragma once

#include <cstdint>
#include <random>

namespace satml {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a root
/// seed and a tuple of indices.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename... Ts>
constexpr std::uint64_t derive_seed(std::uint64_t root, Ts... parts) {
  std::uint64_t h = mix64(root);
  ((h = mix64(h ^ static_cast<std::uint64_t>(parts))), ...);
  return h;
}

/// Seeded stream built on std::mt19937_64, whose output sequence is fixed by
/// the standard. Bounded draws use rejection sampling on the raw 64-bit
/// output instead of std::uniform_int_distribution (implementation-defined),
/// so corpora are reproducible across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold)
        return r % bound;
    }
  }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Uniform real in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

} // namespace satml
