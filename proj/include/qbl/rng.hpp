#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace qbl {

// Sebastiano Vigna's splitmix64; used for seeding and seed derivation.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// Derives an independent stream seed from a master seed and salt words.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt0,
                                 std::uint64_t salt1 = 0, std::uint64_t salt2 = 0) {
  SplitMix64 mix(master);
  std::uint64_t s = mix.next();
  s ^= SplitMix64(salt0 ^ 0x243f6a8885a308d3ULL).next();
  s = SplitMix64(s).next();
  s ^= SplitMix64(salt1 ^ 0x13198a2e03707344ULL).next();
  s = SplitMix64(s).next();
  s ^= SplitMix64(salt2 ^ 0xa4093822299f31d0ULL).next();
  return SplitMix64(s).next();
}

// xoshiro256++ (Blackman & Vigna). Deterministic across platforms.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 mix(seed);
    for (auto& word : s_) word = mix.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller pair of independent standard normals.
  std::pair<double, double> normal_pair() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

}  // namespace qbl
