#pragma once

#include <cstdint>

namespace flowspace {

// Small deterministic generator (splitmix64). The standard <random>
// distributions are implementation-defined, which would break byte-identical
// reports across toolchains, so sampling is done by hand here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, n), n > 0
  uint64_t below(uint64_t n) { return next() % n; }

  // uniform in [lo, hi] inclusive
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1))); }

  bool chance(uint64_t num, uint64_t den) { return below(den) < num; }

 private:
  uint64_t state_;
};

}  // namespace flowspace
