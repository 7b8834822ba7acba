#include "volsample/timing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "volsample/error.hpp"
#include "volsample/fixtures.hpp"
#include "volsample/oracle.hpp"

namespace volsample {

double median_millis(const std::function<void()>& fn, TimingPolicy policy) {
  if (policy.repetitions < 1) {
    throw Error(ErrorCode::InvalidConfig, "need at least one repetition");
  }
  for (int k = 0; k < policy.warmups; ++k) fn();
  std::vector<double> ms;
  ms.reserve(policy.repetitions);
  for (int k = 0; k < policy.repetitions; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  const auto m = ms.size() / 2;
  return ms.size() % 2 ? ms[m] : 0.5 * (ms[m - 1] + ms[m]);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidConfig, "slope needs at least two points");
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

BenchResult run_bench(const BenchSpec& spec) {
  if (spec.sizes.size() < 2) {
    throw Error(ErrorCode::InvalidConfig, "bench needs at least two sizes");
  }
  BenchResult out;
  std::vector<Matrix> inputs;
  for (Index n : spec.sizes) {
    inputs.push_back(fixtures::gaussian_matrix(n, spec.d, spec.seed));
    validate(inputs.back(),
             SamplerConfig{spec.s, spec.lambda, spec.seed, Algorithm::RegVol});
  }
  for (Algorithm a : spec.algorithms) {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < spec.sizes.size(); ++k) {
      const SamplerConfig cfg{spec.s, spec.lambda, spec.seed, a};
      BenchPoint pt{a, spec.sizes[k], 0.0, 0};
      pt.millis = median_millis(
          [&] {
            Rng rng(cfg.seed);
            pt.rejection_trials = draw_subset(inputs[k], cfg, rng).rejection_trials;
          },
          spec.policy);
      xs.push_back(static_cast<double>(pt.n));
      ys.push_back(std::max(pt.millis, 1e-6));
      out.points.push_back(pt);
    }
    out.slopes.push_back(log_log_slope(xs, ys));
  }
  return out;
}

}  // namespace volsample
