#include <gtest/gtest.h>

#include <cmath>

#include "reference.hpp"
#include "volsample/error.hpp"
#include "volsample/fixtures.hpp"
#include "volsample/linalg.hpp"

using namespace volsample;

namespace {

const Matrix kDegenerate{{1, 1}, {1, 1}, {1, 0}};

void expect_near(const Matrix& a, const Matrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE(ref::max_abs_diff(a, b), tol);
}

}  // namespace

TEST(Gram, DegenerateFixture) {
  EXPECT_EQ(gram(kDegenerate).matrix(), (Matrix{{3, 2}, {2, 2}}));
}

TEST(Gram, Identity) { EXPECT_EQ(gram(Matrix::identity(2)).matrix(), Matrix::identity(2)); }

TEST(Gram, Regularized) {
  EXPECT_EQ(gram(kDegenerate, 1.0).matrix(), (Matrix{{4, 2}, {2, 3}}));
}

TEST(Gram, MatchesReferenceOnGaussian) {
  const Matrix x = fixtures::gaussian_matrix(700, 4, 11);
  expect_near(gram(x, 0.5).matrix(), ref::gram(x, 0.5), 1e-10);
}

TEST(Cholesky, LogDeterminant) {
  EXPECT_NEAR(chol_logdet(SpdMatrix(Matrix::identity(3))), 0.0, 1e-15);
  EXPECT_NEAR(chol_logdet(SpdMatrix(Matrix{{3, 2}, {2, 2}})), std::log(2.0), 1e-14);
  const double eps = 0.1;
  EXPECT_NEAR(chol_logdet(SpdMatrix(Matrix{{eps * eps, 0}, {0, 1}})), std::log(1e-2),
              1e-12);
}

TEST(Cholesky, LogDeterminantMatchesElimination) {
  const Matrix x = fixtures::gaussian_matrix(9, 5, 3);
  EXPECT_NEAR(chol_logdet(gram(x)), std::log(ref::det(ref::gram(x))), 1e-10);
}

TEST(Cholesky, RejectsSingular) {
  try {
    Cholesky c(SpdMatrix(Matrix{{1, 1}, {1, 1}}));
    FAIL() << "expected NotPositiveDefinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
  }
  EXPECT_THROW(Cholesky(SpdMatrix(Matrix{{-1, 0}, {0, 1}})), Error);
}

TEST(Cholesky, ConditionEstimate) {
  EXPECT_NEAR(Cholesky(SpdMatrix(Matrix{{100, 0}, {0, 1}})).condition_estimate(), 100.0,
              1e-12);
}

TEST(SolveSpd, Examples) {
  const Vector b{1.0, -2.0, 0.5};
  const Vector x = solve_spd(SpdMatrix(Matrix::identity(3)), b);
  EXPECT_EQ(x, b);

  expect_near(solve_spd(SpdMatrix(Matrix{{3, 2}, {2, 2}}), Matrix::identity(2)),
              Matrix{{1, -1}, {-1, 1.5}}, 1e-14);

  const Vector y = solve_spd(SpdMatrix(2.0 * Matrix::identity(2)), Vector{4, 6});
  EXPECT_NEAR(y[0], 2.0, 1e-15);
  EXPECT_NEAR(y[1], 3.0, 1e-15);
}

TEST(SolveSpd, InverseTimesMatrixIsIdentity) {
  const Matrix a{{3, 2}, {2, 2}};
  expect_near(ref::multiply(a, inverse_spd(SpdMatrix(a)).matrix()), Matrix::identity(2),
              1e-14);
}

TEST(LeverageScores, Examples) {
  for (double l : leverage_scores(Matrix::identity(4))) EXPECT_NEAR(l, 1.0, 1e-15);

  const Vector two = leverage_scores(Matrix{{1}, {1}});
  EXPECT_NEAR(two[0], 0.5, 1e-15);
  EXPECT_NEAR(two[1], 0.5, 1e-15);

  const Vector deg = leverage_scores(kDegenerate);
  EXPECT_NEAR(deg[0], 0.5, 1e-14);
  EXPECT_NEAR(deg[1], 0.5, 1e-14);
  EXPECT_NEAR(deg[2], 1.0, 1e-14);
}

TEST(LeverageScores, SumToRank) {
  const Matrix x = fixtures::gaussian_matrix(40, 6, 5);
  double total = 0;
  for (double l : leverage_scores(x)) total += l;
  EXPECT_NEAR(total, 6.0, 1e-10);
}

TEST(Downdate, ZeroRowLeavesInverseUnchanged) {
  const SpdMatrix z(Matrix{{2, 0.5}, {0.5, 1}});
  const SpdMatrix out = sherman_morrison_downdate(z, Vector{0, 0}, 1.0);
  EXPECT_EQ(out.matrix(), z.matrix());
}

TEST(Downdate, SingleRemovalMatchesFromScratch) {
  const Matrix x = fixtures::gaussian_matrix(6, 3, 21);
  const Matrix z = inverse_spd(gram(x)).matrix();
  const auto x0 = x.row(0);
  const double h = 1.0 - quadratic_form(z, x0);
  const SpdMatrix down = sherman_morrison_downdate(SpdMatrix(z), x0, h);
  expect_near(down.matrix(), ref::inverse(ref::gram(drop_row(x, 0))), 1e-10);
}

TEST(Downdate, ChainedRemovalsMatchFromScratch) {
  const Matrix x = fixtures::gaussian_matrix(8, 3, 22);
  Matrix z = inverse_spd(gram(x, 0.1)).matrix();
  for (Index i : {0, 3, 5}) {
    const Vector zx = z * x.row(i);
    const double h = 1.0 - dot(x.row(i), zx);
    downdate_inverse_inplace(z, zx, h);
  }
  const Matrix rest = select_rows(x, IndexList{1, 2, 4, 6, 7});
  expect_near(z, ref::inverse(ref::gram(rest, 0.1)), 1e-9);
}

TEST(Downdate, SingularThrows) {
  // Removing one of two orthogonal unit rows leaves a rank-one Gram matrix.
  const Matrix x = Matrix::identity(2);
  const SpdMatrix z = inverse_spd(gram(x));
  try {
    sherman_morrison_downdate(z, x.row(0), 1.0 - z.quadratic_form(x.row(0)));
    FAIL() << "expected SingularDowndate";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularDowndate);
  }
}

TEST(Eigenvalues, DiagonalAndRotated) {
  const Vector ev = symmetric_eigenvalues(Matrix{{2, 1}, {1, 2}});
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], 1.0, 1e-13);
  EXPECT_NEAR(ev[1], 3.0, 1e-13);
  EXPECT_NEAR(min_eigenvalue(Matrix{{1, -1}, {-1, 1}}), 0.0, 1e-14);
}

TEST(Eigenvalues, TraceAndDeterminantPreserved) {
  const Matrix g = gram(fixtures::gaussian_matrix(10, 5, 8)).matrix();
  const Vector ev = symmetric_eigenvalues(g);
  double sum = 0, logprod = 0;
  for (double e : ev) {
    sum += e;
    logprod += std::log(e);
  }
  EXPECT_NEAR(sum, trace(g), 1e-10 * trace(g));
  EXPECT_NEAR(logprod, std::log(ref::det(g)), 1e-9);
}

TEST(Pseudoinverse, LeftInverse) {
  const Matrix x = fixtures::gaussian_matrix(7, 3, 4);
  expect_near(pseudoinverse(x) * x, Matrix::identity(3), 1e-12);
}

TEST(MatrixOps, MaskRowsZeroesUnselected) {
  const Matrix m = mask_rows(kDegenerate, IndexList{2});
  EXPECT_EQ(m, (Matrix{{0, 0}, {0, 0}, {1, 0}}));
}
