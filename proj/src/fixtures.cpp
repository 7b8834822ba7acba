#include "volsample/fixtures.hpp"

#include <cmath>

#include "volsample/rng.hpp"

namespace volsample::fixtures {

Fixture degenerate() {
  return {"degenerate-3x2",
          {Matrix{{1, 1}, {1, 1}, {1, 0}}, Vector{1, 0, 0}},
          Position::Degenerate};
}

Fixture perturbed(double eps) {
  return {"perturbed-3x2",
          {Matrix{{1, 1 + eps}, {1, 1}, {1, 0}}, Vector{1, 0, 0}},
          Position::General};
}

Fixture centered_simplex(Index d, double alpha) {
  // Columns are the Helmert basis of the hyperplane orthogonal to the
  // all-ones vector in R^{d+1}; row k is the projected k-th unit vector.
  Matrix x(d + 1, d);
  for (Index j = 0; j < d; ++j) {
    const double m = static_cast<double>(j + 1);
    const double norm = std::sqrt(m * (m + 1.0));
    for (Index k = 0; k <= j; ++k) x(k, j) = 1.0 / norm;
    x(j + 1, j) = -m / norm;
  }
  return {"centered-simplex-d" + std::to_string(d),
          {std::move(x), Vector(d + 1, alpha)},
          Position::General};
}

Matrix block_identity(Index copies, Index d) {
  Matrix x(copies * d, d);
  for (Index c = 0; c < copies; ++c)
    for (Index j = 0; j < d; ++j) x(c * d + j, j) = 1.0;
  return x;
}

NoiseModel block_identity_noise(Index d, double a, double sigma) {
  return {Vector(d, a * sigma), sigma};
}

Matrix gaussian_matrix(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, d);
  for (double& v : x.data()) v = rng.normal();
  return x;
}

Fixture gaussian(Index n, Index d, std::uint64_t seed) {
  Matrix x = gaussian_matrix(n, d, seed);
  Rng rng(Rng::replicate_seed(seed, 0xfeed));
  Vector y(n);
  for (double& v : y) v = rng.normal();
  return {"gaussian-" + std::to_string(n) + "x" + std::to_string(d) + "-s" +
              std::to_string(seed),
          {std::move(x), std::move(y)},
          Position::General};
}

}  // namespace volsample::fixtures
