#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace avoid {

// SplitMix64 finalizer. All randomness in the library goes through this so
// that outputs are bit-identical across platforms and standard libraries.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based draw keyed by (seed, stream, counter).
constexpr std::uint64_t keyed_bits(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t counter) noexcept {
  return mix64(mix64(seed ^ mix64(stream)) + counter);
}

constexpr double bits_to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : state_(mix64(seed ^ mix64(stream + 0x5851f42d4c957f2dULL))) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  double uniform() noexcept { return bits_to_unit(next()); }

  bool bernoulli(double p) noexcept { return p >= 1.0 || uniform() < p; }

  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  Rng split(std::uint64_t stream) noexcept { return Rng(next(), stream); }

  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace avoid
