#pragma once
#include <cstdint>

namespace ase {

// splitmix64 finalizer; every reproducibility guarantee in the project
// reduces to this mixer being a pure function of its inputs.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t hash2(uint64_t seed, uint64_t a) { return mix64(mix64(seed) ^ a); }
inline uint64_t hash3(uint64_t seed, uint64_t a, uint64_t b) { return mix64(hash2(seed, a) ^ b); }

// top 53 bits -> [0,1)
inline double to_unit(uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

// Stateless per-pair draw: sampling the pairs of a graph in any order (or in
// parallel) gives the same result.
inline double pair_uniform(uint64_t seed, uint64_t i, uint64_t j) {
  return to_unit(hash3(seed, i, j));
}

// Sequential splitmix64 stream for the few places that need one.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return to_unit(next()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unbiased integer in [0, bound)
  uint64_t below(uint64_t bound) {
    __uint128_t m = (__uint128_t)next() * bound;
    uint64_t lo = (uint64_t)m;
    if (lo < bound) {
      uint64_t t = (-bound) % bound;
      while (lo < t) {
        m = (__uint128_t)next() * bound;
        lo = (uint64_t)m;
      }
    }
    return (uint64_t)(m >> 64);
  }

 private:
  uint64_t state_;
};

// Named substreams so adding a pipeline stage never shifts another stage's
// draws for the same trial seed.
enum class Stream : uint64_t {
  adjacency = 1,
  degree = 2,
  cluster = 3,
  latent = 4,
  start_vector = 5,
  cluster_embedded = 6,
};

inline uint64_t substream(uint64_t seed, Stream s) {
  return hash2(seed, static_cast<uint64_t>(s));
}

inline uint64_t trial_seed(uint64_t base_seed, uint64_t n, uint64_t trial_index) {
  return hash3(base_seed, n, trial_index);
}

}  // namespace ase
