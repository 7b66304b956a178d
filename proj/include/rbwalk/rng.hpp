#pragma once

#include <cmath>
#include <cstdint>

namespace rbwalk {

// splitmix64 finalizer (Vigna); also used to mix substream keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    return mix64(state);
  }
};

// xoshiro256** (Blackman & Vigna), seeded through splitmix64. Fully
// specified, so streams are identical across platforms and runs.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe as a log argument.
  double uniform_pos() { return double((next() >> 11) + 1) * 0x1.0p-53; }

  // Inverse-transform exponential sample, T = -log(U)/rate with U in (0,1].
  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Key for substream `index` of the ensemble keyed by `seed`. Trajectories
// sampled per-index from these keys form the same ensemble whether drawn
// serially or in parallel.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

}  // namespace rbwalk
