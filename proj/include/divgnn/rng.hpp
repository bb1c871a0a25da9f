#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace divgnn {

// Deterministic RNG wrapper. All draws go through hand-rolled mappings from
// the mt19937_64 stream so results do not depend on the standard library's
// distribution implementations.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::uint64_t next() { return eng(); }

  // uniform in [0, 1) with 53-bit resolution
  double unif() { return double(next() >> 11) * (1.0 / 9007199254740992.0); }

  double unif(double lo, double hi) { return lo + (hi - lo) * unif(); }

  // uniform integer in [0, n), n > 0; rejection-free modulo is fine here
  // because n is tiny relative to 2^64 (bias < 2^-40 for n < 2^24)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    // Fisher-Yates, explicit so the permutation is implementation-independent
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }
};

// splitmix64 step; used to derive independent stream seeds from (seed, tag)
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed) ^ mix64(tag + 0x51ed2701ULL));
}

}  // namespace divgnn
