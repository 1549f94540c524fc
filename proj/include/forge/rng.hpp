#pragma once

#include <cmath>
#include <cstdint>

namespace forge {

// SplitMix64 finalizer. Used both as the PRNG step and as a cheap hash for
// deriving independent streams from (seed, key) pairs.
inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Deterministic PRNG with keyed forking. Every random decision in the
// toolkit flows through one of these, seeded explicitly, so that any
// operation is a pure function of (inputs, seed). Child streams obtained
// via fork(key) do not depend on how many draws the parent has made.
class Rng {
 public:
  explicit Rng(uint64_t seed)
      : root_(mix64(seed ^ 0x6a09e667f3bcc909ULL)), state_(root_) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  float next_float() { return static_cast<float>((next_u64() >> 40) * 0x1.0p-24); }

  // Uniform integer in [lo, hi], inclusive. Modulo bias is negligible for
  // the ranges used here (charsets, pixel coordinates).
  int next_int(int lo, int hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Box-Muller; the second deviate of each pair is cached.
  double normal(double mean = 0.0, double stddev = 1.0) {
    if (have_cached_) {
      have_cached_ = false;
      return mean + stddev * cached_;
    }
    double u1 = 0.0;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return mean + stddev * r * std::cos(a);
  }

  // Independent child stream identified by key; stable no matter how many
  // draws the parent performed.
  Rng fork(uint64_t key) const {
    return Rng(root_ ^ mix64(key ^ 0xd1b54a32d192ed03ULL));
  }

  // Deterministic Fisher-Yates shuffle.
  template <typename Vec>
  void shuffle(Vec& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = next_u64() % i;
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t root_;
  uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace forge
