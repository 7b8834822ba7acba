#pragma once

#include <span>

#include "volsample/matrix.hpp"

namespace volsample {

// Pivots at or below this fraction of the largest diagonal entry are treated
// as zero, which makes singularity detection independent of scale.
inline constexpr double kPivotTolerance = 1e-12;

// h <= this is a singular downdate (the removed row carried all remaining
// volume in some direction).
inline constexpr double kDowndateTolerance = 1e-10;

/// X^T X + lambda I, symmetrized after accumulation.
SpdMatrix gram(const Matrix& x, double lambda = 0.0);

/// Lower-triangular Cholesky factor A = L L^T.
///
/// Throws Error{NotPositiveDefinite} when a pivot falls below
/// pivot_tolerance times the largest diagonal entry of A.
class Cholesky {
 public:
  explicit Cholesky(const SpdMatrix& a,
                    double pivot_tolerance = kPivotTolerance);

  Index dim() const noexcept { return l_.rows(); }
  const Matrix& factor() const noexcept { return l_; }

  double log_determinant() const;
  Vector solve(std::span<const double> b) const;
  Matrix solve(const Matrix& b) const;
  SpdMatrix inverse() const;
  // Cheap condition estimate (max L_ii / min L_ii)^2.
  double condition_estimate() const;

 private:
  void forward(std::span<double> x) const;
  void backward(std::span<double> x) const;

  Matrix l_;
};

double chol_logdet(const SpdMatrix& a);
Vector solve_spd(const SpdMatrix& a, std::span<const double> b);
Matrix solve_spd(const SpdMatrix& a, const Matrix& b);
SpdMatrix inverse_spd(const SpdMatrix& a);

/// l_i = x_i^T (X^T X + lambda I)^{-1} x_i for every row.
Vector leverage_scores(const Matrix& x, double lambda = 0.0);

/// Rank-one inverse downdate: returns Z + (Zx)(Zx)^T / h.
///
/// When Z = (X_S^T X_S + lambda I)^{-1} and h = 1 - x^T Z x, the result is
/// the inverse with row x removed. Throws Error{SingularDowndate} if
/// h <= kDowndateTolerance.
SpdMatrix sherman_morrison_downdate(const SpdMatrix& z,
                                    std::span<const double> x, double h);

/// In-place variant of the downdate used on hot paths; `zx` is Z x.
void downdate_inverse_inplace(Matrix& z, std::span<const double> zx, double h);

/// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
Vector symmetric_eigenvalues(const Matrix& a);
double min_eigenvalue(const Matrix& a);

/// Pseudoinverse of a full-column-rank matrix, (A^T A)^{-1} A^T.
Matrix pseudoinverse(const Matrix& a);

}  // namespace volsample
