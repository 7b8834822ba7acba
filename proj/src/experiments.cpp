#include "volsample/experiments.hpp"

#include <cmath>
#include <exception>
#include <vector>

#include "volsample/error.hpp"
#include "volsample/oracle.hpp"

namespace volsample {

MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (values.size() - 1) / values.size());
  }
  return out;
}

namespace {

struct ReplicateResult {
  bool ok = false;
  double loss = 0.0;
  double mspe = 0.0;
  double mse = 0.0;
  double trials = 0.0;
};

}  // namespace

ReplicateOutcome run_replicates(const RegressionProblem& p,
                                const ReplicateSpec& spec) {
  validate(p);
  if (spec.replicates == 0 || spec.average_over == 0) {
    throw Error(ErrorCode::InvalidConfig, "replicate counts must be positive");
  }
  if (spec.redraw_noise && !spec.truth) {
    throw Error(ErrorCode::InvalidConfig, "noise redraw needs true weights");
  }
  const SamplerConfig cfg{spec.size, spec.sample_lambda, spec.seed,
                          spec.algorithm};
  validate(p.x, cfg);
  if (spec.truth && spec.truth->true_weights.size() != p.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "true weight vector length does not match feature count");
  }

  std::vector<ReplicateResult> results(spec.replicates);
  std::vector<std::exception_ptr> errors(spec.replicates);

#pragma omp parallel for schedule(dynamic, 8)
  for (long r = 0; r < static_cast<long>(spec.replicates); ++r) {
    try {
      const auto rep = static_cast<std::uint64_t>(r);
      Rng sampler = Rng::for_replicate(spec.seed, 2 * rep);
      RegressionProblem local;
      const RegressionProblem* prob = &p;
      if (spec.redraw_noise) {
        Rng noise = Rng::for_replicate(spec.seed, 2 * rep + 1);
        local = generate_noisy_problem(p.x, *spec.truth, noise);
        prob = &local;
      }
      std::vector<SubsetSample> samples;
      for (Index k = 0; k < spec.average_over; ++k)
        samples.push_back(draw_subset(prob->x, cfg, sampler));

      ReplicateResult& out = results[r];
      for (const auto& s : samples) out.trials += s.rejection_trials;
      try {
        const Estimator e =
            spec.average_over == 1
                ? solve_subproblem(*prob, samples.front(), spec.ridge_lambda)
                : averaged_estimator(*prob, samples, spec.ridge_lambda);
        out.loss = total_loss(*prob, e);
        if (spec.truth) {
          out.mspe = mspe(*prob, e, *spec.truth);
          out.mse = mse(e, *spec.truth);
        }
        out.ok = true;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::RankDeficientSubset) throw;
      }
    } catch (...) {
      errors[r] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<double> loss, mean_loss, mspes, mses, trials;
  ReplicateOutcome out;
  const double n = static_cast<double>(p.rows());
  for (const auto& r : results) {
    trials.push_back(r.trials);
    if (!r.ok) {
      ++out.failed;
      continue;
    }
    loss.push_back(r.loss);
    mean_loss.push_back(r.loss / n);
    mspes.push_back(r.mspe);
    mses.push_back(r.mse);
  }
  out.total_loss = mean_se(loss);
  out.mean_loss = mean_se(mean_loss);
  out.rejection_trials = mean_se(trials);
  if (spec.truth) {
    out.mspe = mean_se(mspes);
    out.mse = mean_se(mses);
  }
  return out;
}

double exact_expected_loss(const RegressionProblem& p, Index s,
                           double sample_lambda, double ridge_lambda) {
  validate(p);
  const auto dist = exact_distribution(p.x, s, sample_lambda);
  double total = 0.0;
  for (const auto& e : dist.entries()) {
    if (!std::isfinite(e.log_prob)) continue;
    const double prob = std::exp(e.log_prob);
    if (prob == 0.0) continue;
    total += prob * total_loss(p, solve_subproblem(p, e.subset, ridge_lambda));
  }
  return total;
}

}  // namespace volsample
