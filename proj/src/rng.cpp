#include "volsample/rng.hpp"

#include <algorithm>

namespace volsample {

std::uint64_t Rng::replicate_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Index Rng::uniform_index(Index n) {
  const auto k = static_cast<Index>(uniform() * static_cast<double>(n));
  return std::min(k, n - 1);
}

double Rng::normal() { return normal_(engine_); }

}  // namespace volsample
