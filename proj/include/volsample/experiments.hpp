#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "volsample/regression.hpp"
#include "volsample/sampling.hpp"

namespace volsample {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  Index count = 0;
};

MeanSe mean_se(std::span<const double> values);

struct ReplicateSpec {
  Algorithm algorithm = Algorithm::RegVol;
  Index size = 0;
  double sample_lambda = 0.0;  // passed to the sampler
  double ridge_lambda = 0.0;   // used to solve each subproblem
  Index replicates = 100;
  std::uint64_t seed = 0;
  // Averaged-estimator mode: each replicate averages this many estimators
  // and contributes one loss. 1 means plain replicates.
  Index average_over = 1;
  // When set, MSPE and MSE against true_weights are reported.
  std::optional<NoiseModel> truth;
  // Redraw y = X w_true + noise for every replicate (requires truth).
  bool redraw_noise = false;
};

struct ReplicateOutcome {
  MeanSe total_loss;  // ||X w - y||^2
  MeanSe mean_loss;   // (1/n) ||X w - y||^2
  std::optional<MeanSe> mspe;
  std::optional<MeanSe> mse;
  MeanSe rejection_trials;
  Index failed = 0;  // rank-deficient subproblems, excluded from the means
};

/// Monte Carlo over independent replicates. Replicate r draws its subsets
/// from Rng::for_replicate(spec.seed, r) and its noise from a separate
/// stream, so results do not depend on the thread count.
ReplicateOutcome run_replicates(const RegressionProblem& p,
                                const ReplicateSpec& spec);

/// Exact E[||X w*_ridge(S) - y||^2] under (regularized) volume sampling by
/// enumeration.
double exact_expected_loss(const RegressionProblem& p, Index s,
                           double sample_lambda, double ridge_lambda);

}  // namespace volsample
