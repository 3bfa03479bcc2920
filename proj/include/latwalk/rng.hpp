#pragma once

#include <cstdint>
#include <random>

namespace latwalk {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-trial generator seed; the mapping is fixed so experiments are
// reproducible from (master_seed, trial_index) alone.
inline uint64_t derive_seed(uint64_t master_seed, uint64_t stream_index) {
  return splitmix64(master_seed ^ splitmix64(stream_index + 1));
}

// Seeded generator with platform-stable output: mt19937_64 is fully specified
// by the standard, and all derived draws below use integer arithmetic only.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t raw() { return gen_(); }

  // 53-bit dyadic uniform on (0, 1]: (k+1) * 2^-53. Never returns 0, so maps
  // like t -> t^-p stay finite.
  double uniform() {
    uint64_t k = gen_() >> 11;
    return static_cast<double>(k + 1) * 0x1p-53;
  }

  bool bit() { return (gen_() >> 63) != 0; }

  // Uniform index in [0, n) by masked rejection.
  uint32_t index(uint32_t n) {
    if (n <= 1) return 0;
    uint32_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    while (true) {
      uint32_t v = static_cast<uint32_t>(gen_() >> 32) & mask;
      if (v < n) return v;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace latwalk
