#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ccgeo {

// Seeded deterministic sampling. std::mt19937_64 output is pinned by the
// standard; the reductions below avoid implementation-defined distributions
// so that reports are byte-identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  // uniform in [0, n)
  uint64_t below(uint64_t n) {
    // rejection sampling to kill modulo bias deterministically
    uint64_t limit = n * (UINT64_MAX / n);
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  // uniform in [lo, hi] inclusive
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ccgeo
