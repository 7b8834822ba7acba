#include "volsample/regression.hpp"

#include <cmath>
#include <string>

#include "volsample/error.hpp"
#include "volsample/linalg.hpp"

namespace volsample {

void validate(const RegressionProblem& p) {
  if (p.x.rows() != p.y.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "response length " + std::to_string(p.y.size()) +
                    " does not match " + std::to_string(p.x.rows()) + " rows");
  }
  if (!p.x.all_finite()) {
    throw Error(ErrorCode::InvalidConfig, "design matrix has non-finite entries");
  }
  for (double v : p.y) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidConfig, "responses have non-finite entries");
    }
  }
}

namespace {

Estimator solve_rows(const Matrix& xs, std::span<const double> ys,
                     double lambda) {
  Estimator e;
  e.lambda = lambda;
  try {
    Cholesky chol(gram(xs, lambda), kSubproblemPivotTolerance);
    e.w = chol.solve(xs.transpose() * ys);
    e.condition_estimate = chol.condition_estimate();
    e.ill_conditioned = e.condition_estimate > kIllConditioned;
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NotPositiveDefinite) throw;
    throw Error(ErrorCode::RankDeficientSubset,
                "subproblem Gram matrix is singular (rank-deficient subset)");
  }
  return e;
}

}  // namespace

Estimator solve_full(const RegressionProblem& p, double lambda) {
  validate(p);
  return solve_rows(p.x, p.y, lambda);
}

Estimator solve_subproblem(const RegressionProblem& p,
                           std::span<const Index> subset, double lambda) {
  validate(p);
  return solve_rows(select_rows(p.x, subset), select(p.y, subset), lambda);
}

Estimator solve_subproblem(const RegressionProblem& p, const SubsetSample& s,
                           double lambda) {
  validate(p);
  Matrix xs = select_rows(p.x, s.indices);
  Vector ys = select(p.y, s.indices);
  if (!s.importance_weights.empty()) {
    for (Index k = 0; k < xs.rows(); ++k) {
      const double w = s.importance_weights[k];
      for (double& v : xs.row(k)) v *= w;
      ys[k] *= w;
    }
  }
  Estimator e = solve_rows(xs, ys, lambda);
  e.subset = s;
  return e;
}

double total_loss(const RegressionProblem& p, std::span<const double> w) {
  double loss = 0.0;
  for (Index i = 0; i < p.rows(); ++i) {
    const double r = dot(p.x.row(i), w) - p.y[i];
    loss += r * r;
  }
  return loss;
}

double total_loss(const RegressionProblem& p, const Estimator& e) {
  return total_loss(p, e.w);
}

double mean_total_loss(const RegressionProblem& p, const Estimator& e) {
  return total_loss(p, e.w) / static_cast<double>(p.rows());
}

double loo_identity_residual(const RegressionProblem& p, Index i) {
  validate(p);
  if (i >= p.rows()) {
    throw Error(ErrorCode::InvalidConfig, "row index out of range");
  }
  const Estimator full = solve_full(p);
  RegressionProblem reduced{drop_row(p.x, i), p.y};
  reduced.y.erase(reduced.y.begin() + static_cast<std::ptrdiff_t>(i));
  const Estimator loo = solve_full(reduced);

  const double li = leverage_scores(p.x)[i];
  const double ri = dot(p.x.row(i), loo.w) - p.y[i];
  const double lhs = total_loss(p, loo) - total_loss(p, full);
  return std::abs(lhs - li * ri * ri);
}

Estimator averaged_estimator(const RegressionProblem& p,
                             std::span<const SubsetSample> samples,
                             double lambda) {
  if (samples.empty()) {
    throw Error(ErrorCode::InvalidConfig, "averaging needs at least one sample");
  }
  Estimator avg;
  avg.lambda = lambda;
  avg.w.assign(p.dim(), 0.0);
  for (const auto& s : samples) {
    const Estimator e = solve_subproblem(p, s, lambda);
    for (Index j = 0; j < p.dim(); ++j) avg.w[j] += e.w[j];
    avg.condition_estimate = std::max(avg.condition_estimate, e.condition_estimate);
  }
  for (double& v : avg.w) v /= static_cast<double>(samples.size());
  avg.ill_conditioned = avg.condition_estimate > kIllConditioned;
  return avg;
}

double mspe(const RegressionProblem& p, const Estimator& e,
            const NoiseModel& model) {
  Vector diff(e.w.size());
  for (Index j = 0; j < diff.size(); ++j) diff[j] = e.w[j] - model.true_weights[j];
  return squared_norm(p.x * diff) / static_cast<double>(p.rows());
}

double mse(const Estimator& e, const NoiseModel& model) {
  double s = 0.0;
  for (Index j = 0; j < e.w.size(); ++j) {
    const double r = e.w[j] - model.true_weights[j];
    s += r * r;
  }
  return s;
}

RegressionProblem generate_noisy_problem(const Matrix& x,
                                         const NoiseModel& model, Rng& rng) {
  if (model.true_weights.size() != x.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "true weight vector length does not match feature count");
  }
  if (!(model.sigma >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "noise level must be >= 0");
  }
  RegressionProblem p{x, x * model.true_weights};
  if (model.sigma > 0.0) {
    for (double& v : p.y) v += model.sigma * rng.normal();
  }
  return p;
}

}  // namespace volsample
