// Deterministic random source and seed derivation.
//
// All randomness in the library flows through Rng so that runs are
// reproducible for a given master seed regardless of platform stdlib
// differences: the distributions here are implemented explicitly instead
// of relying on std::uniform_int_distribution and friends, whose outputs
// are implementation defined.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace ragalzp {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Chains one token into a running seed.
inline std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t token) {
  return splitmix64(seed ^ splitmix64(token));
}

inline std::uint64_t mixSeed(std::uint64_t seed, std::string_view token) {
  return mixSeed(seed, fnv1a64(token));
}

// deriveSeed(master, "surrogate", pool, s, iteration) style subseeds.
template <typename... Tokens>
std::uint64_t deriveSeed(std::uint64_t master, Tokens... tokens) {
  std::uint64_t h = splitmix64(master);
  ((h = mixSeed(h, tokens)), ...);
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t u64() { return engine_(); }

  // Unbiased integer in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double real01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Box-Muller; the sine branch is discarded to keep the draw count flat.
  double normal(double mean, double sd) {
    double u1 = real01();
    while (u1 <= 0.0) u1 = real01();
    const double u2 = real01();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * 3.141592653589793238462643 * u2);
    return mean + sd * z;
  }

  // Index drawn proportionally to non-negative weights (need not sum to 1).
  std::size_t weightedIndex(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = real01() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      if (target < cum) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ragalzp
