#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gcmp {

// Seedable 64-bit generator (mt19937_64) with a stream-splitting rule.
//
// Stream splitting: child(k) is seeded with
//   splitmix64(seed ^ splitmix64(k + 1))
// where `seed` is the seed this Rng was constructed with. The child depends
// only on (seed, k), never on how many numbers the parent has drawn, so a
// tree of streams (run -> restart -> iteration -> network) replays exactly
// regardless of scheduling or worker count.
//
// Uniform and normal variates are produced by explicit transforms of the raw
// 64-bit output rather than by <random> distributions, whose algorithms are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  static constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  static constexpr std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
  }

  Rng child(std::uint64_t stream) const { return Rng(child_seed(seed_, stream)); }
  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // (0, 1)
  double uniform_open() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Box-Muller, one variate per call.
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    return r * std::cos(2.0 * M_PI * uniform());
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace gcmp
