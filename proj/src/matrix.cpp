#include "volsample/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "volsample/error.hpp"

namespace volsample {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::SingularDowndate: return "SingularDowndate";
    case ErrorCode::AllWeightsZero: return "AllWeightsZero";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::RankDeficientSubset: return "RankDeficientSubset";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Matrix::Matrix(Index rows, Index cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(Index rows, Index cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix data length does not match rows*cols");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(Index n) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (Index i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (Index i = 0; i < rows_; ++i)
    for (Index j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix select_rows(const Matrix& x, std::span<const Index> rows) {
  Matrix out(rows.size(), x.cols());
  for (Index k = 0; k < rows.size(); ++k) {
    auto src = x.row(rows[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
  }
  return out;
}

Vector select(std::span<const double> v, std::span<const Index> idx) {
  Vector out;
  out.reserve(idx.size());
  for (Index i : idx) out.push_back(v[i]);
  return out;
}

Matrix mask_rows(const Matrix& x, std::span<const Index> rows) {
  Matrix out(x.rows(), x.cols());
  for (Index i : rows) {
    auto src = x.row(i);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix drop_row(const Matrix& x, Index i) {
  IndexList keep;
  keep.reserve(x.rows());
  for (Index k = 0; k < x.rows(); ++k)
    if (k != i) keep.push_back(k);
  return select_rows(x, keep);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  }
  Matrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (Index j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> v) {
  if (a.cols() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
  }
  Vector out(a.rows());
  for (Index i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), v);
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  c += b;
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
  }
  Matrix c = a;
  for (Index k = 0; k < c.data().size(); ++k) c.data()[k] -= b.data()[k];
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

Matrix& operator+=(Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
  }
  for (Index k = 0; k < a.data().size(); ++k) a.data()[k] += b.data()[k];
  return a;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (Index k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double trace(const Matrix& a) {
  double t = 0.0;
  for (Index i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix comparison shape mismatch");
  }
  double m = 0.0;
  for (Index k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

SpdMatrix::SpdMatrix(Matrix a) : m_(std::move(a)) {
  if (m_.rows() != m_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "SpdMatrix must be square");
  }
  const Index n = m_.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m_(i, j) + m_(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
  }
}

double SpdMatrix::quadratic_form(std::span<const double> x) const {
  return volsample::quadratic_form(m_, x);
}

double quadratic_form(const Matrix& a, std::span<const double> x) {
  double s = 0.0;
  for (Index i = 0; i < a.rows(); ++i) s += x[i] * dot(a.row(i), x);
  return s;
}

}  // namespace volsample
