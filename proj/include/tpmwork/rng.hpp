// Seeded pseudo-random numbers for Haar draws and protocol sampling.
//
// Generator: xoshiro256++ (Blackman & Vigna). State is four 64-bit words;
// one step computes
//   result = rotl(s0 + s3, 23) + s0
//   t = s1 << 17; s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t;
//   s3 = rotl(s3, 45)
// The state is filled from the user seed by four rounds of splitmix64.
// Identical seeds give identical streams; a uniform double in [0, 1) is
// (next() >> 11) * 2^-53.
//
// Stream splitting: stream 0 reuses the base seed unchanged, stream k > 0
// uses base_seed XOR splitmix64(k). Consumers that split work across streams
// must reduce partial results in stream-index order.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tpmwork::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Box-Muller, cosine branch only; consumes two uniforms per normal.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_;
  std::uint64_t state_[4];
};

inline std::uint64_t stream_seed(std::uint64_t base, std::size_t stream) {
  return stream == 0 ? base : (base ^ splitmix64(static_cast<std::uint64_t>(stream)));
}

}  // namespace tpmwork::rng
