#pragma once

#include <cstdint>

namespace kg {

// Counter-based splittable generator: every draw is a pure function of
// (key, counter), so parallel ensembles stay reproducible for a fixed seed
// regardless of evaluation order.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(mix64(seed) ^ (0x85ebca77c2b2ae63ull * (stream + 1)))) {}

  // Independent child generator; label picks the branch.
  CounterRng split(std::uint64_t label) const {
    CounterRng c(0);
    c.key_ = mix64(key_ ^ (0xd6e8feb86659fd93ull * (label + 1)));
    return c;
  }

  std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ ^ mix64(counter)); }

  // Uniform in [0,1).
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(counter);
  }

private:
  std::uint64_t key_;
};

// Stateful convenience wrapper around CounterRng for sequential draws.
class RngStream {
public:
  explicit RngStream(const CounterRng& rng) : rng_(rng) {}
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) : rng_(seed, stream) {}

  double next() { return rng_.uniform(counter_++); }
  double next(double lo, double hi) { return rng_.uniform(counter_++, lo, hi); }
  std::uint64_t next_bits() { return rng_.bits(counter_++); }

private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace kg
