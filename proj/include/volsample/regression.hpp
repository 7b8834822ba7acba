#pragma once

#include <optional>
#include <span>

#include "volsample/matrix.hpp"
#include "volsample/rng.hpp"
#include "volsample/sampling.hpp"

namespace volsample {

struct RegressionProblem {
  Matrix x;
  Vector y;

  Index rows() const noexcept { return x.rows(); }
  Index dim() const noexcept { return x.cols(); }
};

/// Throws Error{DimensionMismatch} / Error{InvalidConfig} on bad shapes or
/// non-finite entries.
void validate(const RegressionProblem& p);

// Subproblems whose Gram condition estimate exceeds this are flagged.
inline constexpr double kIllConditioned = 1e12;
// Subproblem solves only reject numerically singular Gram matrices, so that
// conditions past kIllConditioned are reported rather than refused.
inline constexpr double kSubproblemPivotTolerance = 1e-15;

struct Estimator {
  Vector w;
  double lambda = 0.0;
  std::optional<SubsetSample> subset;
  double condition_estimate = 1.0;
  bool ill_conditioned = false;
};

// y = X w_true + xi, xi ~ N(0, sigma^2 I).
struct NoiseModel {
  Vector true_weights;
  double sigma = 0.0;
};

/// Ridge (lambda > 0) or least-squares (lambda == 0) fit on all rows.
Estimator solve_full(const RegressionProblem& p, double lambda = 0.0);

/// Minimizer of ||X_S w - y_S||^2 + lambda ||w||^2. Multiset samples that
/// carry importance weights are solved on the rescaled rows and responses.
/// Throws Error{RankDeficientSubset} if lambda == 0 and X_S^T X_S is singular.
Estimator solve_subproblem(const RegressionProblem& p, const SubsetSample& s,
                           double lambda);
Estimator solve_subproblem(const RegressionProblem& p,
                           std::span<const Index> subset, double lambda);

/// ||X w - y||^2 over all n rows.
double total_loss(const RegressionProblem& p, std::span<const double> w);
double total_loss(const RegressionProblem& p, const Estimator& e);
/// (1/n) ||X w - y||^2
double mean_total_loss(const RegressionProblem& p, const Estimator& e);

/// |[L(w*_{-i}) - L(w*)] - l_i (x_i^T w*_{-i} - y_i)^2|, the absolute gap in
/// the leave-one-out identity.
double loo_identity_residual(const RegressionProblem& p, Index i);

/// Mean of the per-sample estimators.
Estimator averaged_estimator(const RegressionProblem& p,
                             std::span<const SubsetSample> samples,
                             double lambda);

/// (1/n) ||X (w - w_true)||^2
double mspe(const RegressionProblem& p, const Estimator& e,
            const NoiseModel& model);
/// ||w - w_true||^2
double mse(const Estimator& e, const NoiseModel& model);

RegressionProblem generate_noisy_problem(const Matrix& x,
                                         const NoiseModel& model, Rng& rng);

}  // namespace volsample
