#pragma once

#include <span>

#include "volsample/matrix.hpp"

// Data-parallel inner loops of the samplers. Every kernel exists twice:
//
//   serial::   straightforward loops, the reference the tests compare against
//   parallel:: OpenMP version used by the library
//
// The parallel kernels never reduce across threads in a thread-count
// dependent order, so their output is bit-identical for any OMP_NUM_THREADS.
// Gram accumulation uses fixed-size row blocks combined in block order, which
// is why it may differ from the serial reference in the last few ulps.
//
// `rows` is a packed row-major buffer of `rows.size() / d` rows.

namespace volsample::kernels {

inline constexpr Index kGramBlockRows = 256;

namespace serial {

Matrix gram(std::span<const double> rows, Index d);
void quadratic_forms(std::span<const double> rows, Index d, const Matrix& z,
                     std::span<double> out);
void subtract_squared_projections(std::span<const double> rows, Index d,
                                  std::span<const double> v,
                                  std::span<double> h);

}  // namespace serial

namespace parallel {

Matrix gram(std::span<const double> rows, Index d);
void quadratic_forms(std::span<const double> rows, Index d, const Matrix& z,
                     std::span<double> out);
// h_j -= (x_j^T v)^2 for every row j.
void subtract_squared_projections(std::span<const double> rows, Index d,
                                  std::span<const double> v,
                                  std::span<double> h);

}  // namespace parallel

int max_threads();

}  // namespace volsample::kernels
