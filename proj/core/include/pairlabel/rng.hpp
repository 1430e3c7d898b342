#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace pairlabel {

/// splitmix64 finalizer; the basis of all seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Splittable counter scheme: folds a sequence of salts into a base seed.
/// derive_seed(s, {a, b}) != derive_seed(s, {b, a}) and distinct salts give
/// statistically independent streams.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> salts) {
  std::uint64_t h = splitmix64(base ^ 0xA0761D6478BD642Full);
  for (std::uint64_t s : salts) h = splitmix64(h ^ splitmix64(s));
  return h;
}

/// Deterministic random source. All draws go through explicit conversions
/// (never std::*_distribution, whose output is implementation-defined), so
/// a seed reproduces the same stream on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound), bound >= 1, without modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

  /// Box-Muller normal draw (two uniforms per call, no caching).
  double normal(double mean, double sd) {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + sd * z;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pairlabel
