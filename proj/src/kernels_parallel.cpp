#include <algorithm>

#include "volsample/kernels.hpp"

#ifdef VOLSAMPLE_HAVE_OPENMP
#include <omp.h>
#endif

namespace volsample::kernels {

namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr long kParallelGrain = 1L << 15;

using Ptrdiff = long;

}  // namespace

int max_threads() {
#ifdef VOLSAMPLE_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

Matrix gram(std::span<const double> rows, Index d) {
  Matrix g(d, d);
  if (d == 0) return g;
  const Index n = rows.size() / d;
  const Index blocks = (n + kGramBlockRows - 1) / kGramBlockRows;
  const Index tri = d * (d + 1) / 2;
  std::vector<double> partial(blocks * tri, 0.0);

  const bool go_parallel = static_cast<long>(n * tri) >= kParallelGrain;
  (void)go_parallel;
#pragma omp parallel for schedule(static) if (go_parallel)
  for (Ptrdiff b = 0; b < static_cast<Ptrdiff>(blocks); ++b) {
    double* acc = partial.data() + b * tri;
    const Index lo = b * kGramBlockRows;
    const Index hi = std::min(n, lo + kGramBlockRows);
    for (Index r = lo; r < hi; ++r) {
      const double* x = rows.data() + r * d;
      Index t = 0;
      for (Index j = 0; j < d; ++j) {
        const double xj = x[j];
        for (Index k = j; k < d; ++k) acc[t++] += xj * x[k];
      }
    }
  }

  // Combine blocks in a fixed order so the result does not depend on the
  // thread count.
  std::vector<double> total(tri, 0.0);
  for (Index b = 0; b < blocks; ++b)
    for (Index t = 0; t < tri; ++t) total[t] += partial[b * tri + t];
  Index t = 0;
  for (Index j = 0; j < d; ++j)
    for (Index k = j; k < d; ++k) {
      g(j, k) = total[t];
      g(k, j) = total[t];
      ++t;
    }
  return g;
}

void quadratic_forms(std::span<const double> rows, Index d, const Matrix& z,
                     std::span<double> out) {
  const Index n = out.size();
  const bool go_parallel = static_cast<long>(n * d * d) >= kParallelGrain;
  (void)go_parallel;
#pragma omp parallel for schedule(static) if (go_parallel)
  for (Ptrdiff r = 0; r < static_cast<Ptrdiff>(n); ++r) {
    const double* x = rows.data() + r * d;
    double s = 0.0;
    for (Index j = 0; j < d; ++j) {
      const double* zj = z.data().data() + j * d;
      double zx = 0.0;
      for (Index k = 0; k < d; ++k) zx += zj[k] * x[k];
      s += x[j] * zx;
    }
    out[r] = s;
  }
}

void subtract_squared_projections(std::span<const double> rows, Index d,
                                  std::span<const double> v,
                                  std::span<double> h) {
  const Index n = h.size();
  const bool go_parallel = static_cast<long>(n * d) >= kParallelGrain;
  (void)go_parallel;
#pragma omp parallel for schedule(static) if (go_parallel)
  for (Ptrdiff r = 0; r < static_cast<Ptrdiff>(n); ++r) {
    const double* x = rows.data() + r * d;
    double p = 0.0;
    for (Index k = 0; k < d; ++k) p += x[k] * v[k];
    h[r] -= p * p;
  }
}

}  // namespace parallel
}  // namespace volsample::kernels
