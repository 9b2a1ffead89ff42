#pragma once

#include <cstdint>
#include <random>

namespace pir {

/// splitmix64; used to derive independent sub-seeds from (seed, tag) pairs so
/// that randomness never flows through ambient global state.
inline uint64_t mix_seed(uint64_t seed, uint64_t tag) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic seeded generator. mt19937_64 is fully specified by the
/// standard, so streams are identical across platforms; uniform bounded draws
/// use rejection sampling rather than std distributions (whose output is
/// implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  /// Uniform in [0, n), unbiased.
  uint64_t below(uint64_t n) {
    uint64_t bound = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = eng_();
    } while (v >= bound);
    return v % n;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace pir
