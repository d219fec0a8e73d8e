#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>

namespace pathtrust {

// Deterministic random source. All floating-point draws are derived from raw
// 64-bit engine output by hand so that streams are reproducible bit-for-bit
// from a seed, independent of the standard library's distribution objects.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(scramble(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // always consumes exactly one draw
  bool bernoulli(double p) { return next_unit() < p; }

  // uniform in [0, n), rejection sampled so every value is equally likely
  std::uint32_t uniform_index(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return static_cast<std::uint32_t>(x % span);
  }

  static std::uint64_t scramble(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // stable sub-stream seed from a master seed and an index path
  static std::uint64_t derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = scramble(master);
    for (std::uint64_t part : path) h = scramble(h ^ scramble(part));
    return h;
  }

private:
  std::mt19937_64 gen_;
};

} // namespace pathtrust
