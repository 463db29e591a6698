#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace robustnet {

// splitmix64 finalizer, used to spread seed material.
std::uint64_t mix64(std::uint64_t x);

// Deterministic random stream. Wraps mt19937_64 but implements its own
// integer/real draws so that sequences are identical across platforms and
// standard libraries (std::uniform_int_distribution is not portable).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Seed for an indexed child stream. Streams derived from distinct
  // (master, index) pairs are statistically independent, which makes
  // fan-out computations reproducible regardless of worker count.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased draw from [0, bound), bound >= 1. Masked rejection.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Inclusive range [lo, hi].
  int uniform_int(int lo, int hi);

  // [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace robustnet
