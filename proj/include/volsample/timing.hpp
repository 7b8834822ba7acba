#pragma once

#include <functional>
#include <span>
#include <vector>

#include "volsample/sampling.hpp"

namespace volsample {

struct TimingPolicy {
  int warmups = 1;
  int repetitions = 5;
};

/// Median wall-clock milliseconds of fn() over policy.repetitions calls,
/// after policy.warmups untimed calls.
double median_millis(const std::function<void()>& fn,
                     TimingPolicy policy = {});

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

struct BenchPoint {
  Algorithm algorithm;
  Index n = 0;
  double millis = 0.0;
  std::uint64_t rejection_trials = 0;  // from the last timed run
};

struct BenchSpec {
  std::vector<Algorithm> algorithms;
  std::vector<Index> sizes;
  Index d = 10;
  Index s = 10;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  TimingPolicy policy;
};

struct BenchResult {
  std::vector<BenchPoint> points;  // grouped by algorithm, sizes ascending
  // Slope per algorithm, in the order of spec.algorithms.
  std::vector<double> slopes;
};

/// Times each algorithm on a seeded n x d Gaussian matrix for every n.
BenchResult run_bench(const BenchSpec& spec);

}  // namespace volsample
