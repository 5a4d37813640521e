#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace rumor {

/// SplitMix64 finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `index` under `master`. Injective in `index` for a fixed
/// master because mix64 is a bijection and the argument is an odd-step
/// arithmetic progression.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Engine wrapper with platform-independent sampling helpers.
///
/// The standard distributions are implementation-defined, so two standard
/// libraries may turn the same mt19937_64 stream into different samples. All
/// sampling here is done from raw engine output to keep traces portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound). Rejection sampling, bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % bound;
    }
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rumor
