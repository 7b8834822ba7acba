#include "volsample/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volsample/error.hpp"
#include "volsample/kernels.hpp"

namespace volsample {

SpdMatrix gram(const Matrix& x, double lambda) {
  Matrix g = kernels::parallel::gram(x.data(), x.cols());
  for (Index i = 0; i < g.rows(); ++i) g(i, i) += lambda;
  return SpdMatrix(std::move(g));
}

Cholesky::Cholesky(const SpdMatrix& a, double pivot_tolerance)
    : l_(a.dim(), a.dim()) {
  const Index n = a.dim();
  double max_diag = 0.0;
  for (Index i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double threshold = pivot_tolerance * max_diag;

  for (Index j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (Index k = 0; k < j; ++k) pivot -= l_(j, k) * l_(j, k);
    if (!(pivot > threshold) || max_diag <= 0.0) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "Cholesky pivot " + std::to_string(j) +
                      " below tolerance (matrix is singular or indefinite)");
    }
    const double ljj = std::sqrt(pivot);
    l_(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Index k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      l_(i, j) = s / ljj;
    }
  }
}

double Cholesky::log_determinant() const {
  double s = 0.0;
  for (Index i = 0; i < dim(); ++i) s += std::log(l_(i, i));
  return 2.0 * s;
}

void Cholesky::forward(std::span<double> x) const {
  for (Index i = 0; i < dim(); ++i) {
    double s = x[i];
    for (Index k = 0; k < i; ++k) s -= l_(i, k) * x[k];
    x[i] = s / l_(i, i);
  }
}

void Cholesky::backward(std::span<double> x) const {
  for (Index ii = dim(); ii-- > 0;) {
    double s = x[ii];
    for (Index k = ii + 1; k < dim(); ++k) s -= l_(k, ii) * x[k];
    x[ii] = s / l_(ii, ii);
  }
}

Vector Cholesky::solve(std::span<const double> b) const {
  if (b.size() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "solve: right-hand side length");
  }
  Vector x(b.begin(), b.end());
  forward(x);
  backward(x);
  return x;
}

Matrix Cholesky::solve(const Matrix& b) const {
  if (b.rows() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "solve: right-hand side rows");
  }
  Matrix out(b.rows(), b.cols());
  Vector col(dim());
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < dim(); ++i) col[i] = b(i, j);
    forward(col);
    backward(col);
    for (Index i = 0; i < dim(); ++i) out(i, j) = col[i];
  }
  return out;
}

SpdMatrix Cholesky::inverse() const {
  return SpdMatrix(solve(Matrix::identity(dim())));
}

double Cholesky::condition_estimate() const {
  double lo = l_(0, 0), hi = l_(0, 0);
  for (Index i = 1; i < dim(); ++i) {
    lo = std::min(lo, l_(i, i));
    hi = std::max(hi, l_(i, i));
  }
  const double r = hi / lo;
  return r * r;
}

double chol_logdet(const SpdMatrix& a) { return Cholesky(a).log_determinant(); }

Vector solve_spd(const SpdMatrix& a, std::span<const double> b) {
  return Cholesky(a).solve(b);
}

Matrix solve_spd(const SpdMatrix& a, const Matrix& b) {
  return Cholesky(a).solve(b);
}

SpdMatrix inverse_spd(const SpdMatrix& a) { return Cholesky(a).inverse(); }

Vector leverage_scores(const Matrix& x, double lambda) {
  const SpdMatrix z = inverse_spd(gram(x, lambda));
  Vector scores(x.rows());
  kernels::parallel::quadratic_forms(x.data(), x.cols(), z.matrix(), scores);
  return scores;
}

void downdate_inverse_inplace(Matrix& z, std::span<const double> zx, double h) {
  if (!(h > kDowndateTolerance)) {
    throw Error(ErrorCode::SingularDowndate,
                "downdate weight " + std::to_string(h) + " is not positive");
  }
  const Index d = z.rows();
  const double inv_h = 1.0 / h;
  for (Index i = 0; i < d; ++i) {
    const double a = zx[i] * inv_h;
    for (Index j = 0; j < d; ++j) z(i, j) += a * zx[j];
  }
}

SpdMatrix sherman_morrison_downdate(const SpdMatrix& z,
                                    std::span<const double> x, double h) {
  Matrix out = z.matrix();
  const Vector zx = z.matrix() * x;
  downdate_inverse_inplace(out, zx, h);
  return SpdMatrix(std::move(out));
}

Vector symmetric_eigenvalues(const Matrix& input) {
  if (input.rows() != input.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "eigenvalues need a square matrix");
  }
  Matrix a = SpdMatrix(input).matrix();
  const Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        total += a(i, j) * a(i, j);
        if (i != j) off += a(i, j) * a(i, j);
      }
    if (off <= 1e-30 * total || off == 0.0) break;

    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector ev(n);
  for (Index i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double min_eigenvalue(const Matrix& a) { return symmetric_eigenvalues(a).front(); }

Matrix pseudoinverse(const Matrix& a) {
  return solve_spd(gram(a), a.transpose());
}

}  // namespace volsample
