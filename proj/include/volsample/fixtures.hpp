#pragma once

#include <cstdint>
#include <string>

#include "volsample/matrix.hpp"
#include "volsample/regression.hpp"

namespace volsample {

// Whether every d x d row submatrix is nonsingular. Never auto-detected:
// each fixture is labeled by construction.
enum class Position { General, Degenerate };

struct Fixture {
  std::string name;
  RegressionProblem problem;
  Position position = Position::General;
};

namespace fixtures {

/// X = [[1,1],[1,1],[1,0]], y = (1,0,0). Rows 0 and 1 coincide.
Fixture degenerate();

/// The degenerate fixture with X(0,1) = 1 + eps; general position for eps > 0.
Fixture perturbed(double eps);

/// d+1 corners of a regular simplex centered at the origin (rows sum to
/// zero), all responses equal to alpha.
Fixture centered_simplex(Index d, double alpha = 1.0);

/// [I, ..., I]^T with `copies` stacked d x d identities.
Matrix block_identity(Index copies, Index d);
/// w_true = (a sigma, ..., a sigma).
NoiseModel block_identity_noise(Index d, double a, double sigma);

/// n x d matrix with i.i.d. N(0, 1) entries.
Matrix gaussian_matrix(Index n, Index d, std::uint64_t seed);
/// Gaussian X with Gaussian y; general position almost surely.
Fixture gaussian(Index n, Index d, std::uint64_t seed);

}  // namespace fixtures
}  // namespace volsample
