#pragma once

#include <cstdint>
#include <random>

#include "volsample/matrix.hpp"

namespace volsample {

// Seedable 64-bit generator with a fixed stream contract:
//   uniform()          one engine draw, value in [0, 1)
//   uniform_index(n)   one engine draw
//   bernoulli(p)       one engine draw
//   normal()           std::normal_distribution over the same engine
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for replicate `index` of a run seeded with `base`.
  static Rng for_replicate(std::uint64_t base, std::uint64_t index) {
    return Rng(replicate_seed(base, index));
  }
  static std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t index);

  double uniform();
  Index uniform_index(Index n);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace volsample
