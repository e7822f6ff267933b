#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pls {

/// SplitMix64 mixing step. Advances `state` and returns a well-mixed word.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seedable, splittable random stream.
///
/// Stream `k` of a master seed is an independent generator: the engine seed
/// is derived by hashing (master, k) through SplitMix64. The engine is
/// std::mt19937_64, but uniform and Gaussian draws map engine words to
/// doubles explicitly rather than through std::*_distribution, so a given
/// (seed, stream) pair yields the same sequence on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : RngStream(seed, 0) {}

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t t = stream_index + 0x632BE59BD9B4E019ull;
    std::uint64_t s = master_seed ^ splitmix64(t);
    engine_.seed(splitmix64(s));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform draw strictly inside (0, 1). 53-bit resolution; the exact
  /// endpoint 0 is rejected and redrawn, 1 cannot occur.
  double uniform_open01() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// One N(0, sigma^2) draw via Box-Muller (cosine branch).
  double gaussian(double sigma) {
    const double u1 = uniform_open01();
    const double u2 = uniform_open01();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pls
