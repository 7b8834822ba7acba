#include "volsample/kernels.hpp"

namespace volsample::kernels::serial {

Matrix gram(std::span<const double> rows, Index d) {
  Matrix g(d, d);
  const Index n = d == 0 ? 0 : rows.size() / d;
  for (Index r = 0; r < n; ++r) {
    const double* x = rows.data() + r * d;
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k) g(j, k) += x[j] * x[k];
  }
  return g;
}

void quadratic_forms(std::span<const double> rows, Index d, const Matrix& z,
                     std::span<double> out) {
  const Index n = out.size();
  for (Index r = 0; r < n; ++r) {
    const double* x = rows.data() + r * d;
    double s = 0.0;
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k) s += x[j] * z(j, k) * x[k];
    out[r] = s;
  }
}

void subtract_squared_projections(std::span<const double> rows, Index d,
                                  std::span<const double> v,
                                  std::span<double> h) {
  const Index n = h.size();
  for (Index r = 0; r < n; ++r) {
    double p = 0.0;
    for (Index k = 0; k < d; ++k) p += rows[r * d + k] * v[k];
    h[r] -= p * p;
  }
}

}  // namespace volsample::kernels::serial
