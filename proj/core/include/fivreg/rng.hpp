#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fivreg {

/// Counter-based generator (Philox 4x64, 10 rounds).
///
/// State is a 256-bit counter plus a 128-bit key derived from (seed, stream).
/// Distinct streams under the same seed yield statistically independent
/// sequences, and a given (seed, stream) pair reproduces the same sequence on
/// every platform, which is what makes replicate-level parallelism safe.
class Rng {
 public:
  using u64 = std::uint64_t;

  explicit Rng(u64 seed, u64 stream = 0) : key_{seed, stream}, counter_{0, 0, 0, 0} {}

  /// Raw 64-bit draw.
  u64 next_u64() {
    if (idx_ == 4) {
      counter_[0] += 1;
      if (counter_[0] == 0) {
        counter_[1] += 1;
        if (counter_[1] == 0) {
          counter_[2] += 1;
          if (counter_[2] == 0) counter_[3] += 1;
        }
      }
      block_ = philox(counter_, key_);
      idx_ = 0;
    }
    return block_[idx_++];
  }

  /// Uniform draw on (0, 1): (x >> 11 + 0.5) * 2^-53, never exactly 0 or 1.
  double uniform() {
    const double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(next_u64() >> 11) + 0.5) * kScale;
  }

  /// Standard normal via Box-Muller; draws come in cached pairs.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Unbiased draw from {0, 1, ..., bound-1} via rejection on the top range.
  u64 uniform_int(u64 bound) {
    if (bound == 0) throw std::invalid_argument("Rng::uniform_int: bound must be positive");
    u64 threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      u64 x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  /// Fisher-Yates shuffle. std::shuffle is implementation-defined, so the
  /// permutation sequence is pinned down here instead.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// One keyed 256-bit block; exposed for known-answer tests.
  static std::array<u64, 4> philox(std::array<u64, 4> x, std::array<u64, 2> k) {
    constexpr u64 kMul0 = 0xD2E7470EE14C6C93ull;
    constexpr u64 kMul1 = 0xCA5A826395121157ull;
    constexpr u64 kWeyl0 = 0x9E3779B97F4A7C15ull;
    constexpr u64 kWeyl1 = 0xBB67AE8584CAA73Bull;
    for (int round = 0; round < 10; ++round) {
      u64 hi0, hi1;
      u64 lo0 = mulhilo(kMul0, x[0], hi0);
      u64 lo1 = mulhilo(kMul1, x[2], hi1);
      x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    return x;
  }

 private:
  static u64 mulhilo(u64 a, u64 b, u64& hi) {
    unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<u64>(prod >> 64);
    return static_cast<u64>(prod);
  }

  std::array<u64, 2> key_;
  std::array<u64, 4> counter_;
  std::array<u64, 4> block_{};
  int idx_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611ull;

}  // namespace fivreg
