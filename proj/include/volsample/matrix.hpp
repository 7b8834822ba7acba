#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace volsample {

using Vector = std::vector<double>;
using Index = std::size_t;
using IndexList = std::vector<Index>;

// Dense row-major matrix. Rows are data points, columns are features.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Index rows, Index cols, double fill = 0.0);
  Matrix(Index rows, Index cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(Index n);
  static Matrix diagonal(std::span<const double> diag);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(Index i, Index j) { return data_[i * cols_ + j]; }
  double operator()(Index i, Index j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(Index i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(Index i) { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  Matrix transpose() const;
  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

Matrix select_rows(const Matrix& x, std::span<const Index> rows);
Vector select(std::span<const double> v, std::span<const Index> idx);
// I_S X: rows outside `rows` are zeroed, shape is kept.
Matrix mask_rows(const Matrix& x, std::span<const Index> rows);
// X with row i removed.
Matrix drop_row(const Matrix& x, Index i);

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> v);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix& operator+=(Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double trace(const Matrix& a);
// x^T A x for square A.
double quadratic_form(const Matrix& a, std::span<const double> x);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Square matrix that is symmetric by construction: the constructor replaces
// its argument with (A + A^T) / 2. Positive definiteness is checked lazily by
// the Cholesky factorization.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(Matrix a);

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

  // x^T A x
  double quadratic_form(std::span<const double> x) const;

 private:
  Matrix m_;
};

}  // namespace volsample
