#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "volsample/matrix.hpp"
#include "volsample/rng.hpp"

namespace volsample {

enum class Algorithm { RegVol, FastRegVol, LeverageIID, Oracle };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

// Weights at or below this are treated as exact zeros and never selected.
inline constexpr double kZeroWeightTolerance = 1e-10;
// Total weight at or below this triggers the uniform fallback.
inline constexpr double kZeroTotalTolerance = 1e-12;

struct SamplerConfig {
  Index target_size = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::RegVol;
};

/// Throws Error{InvalidConfig} unless lambda >= 0 and
/// d <= s <= n (lambda == 0) or 1 <= s <= n (lambda > 0).
void validate(const Matrix& x, const SamplerConfig& cfg);

struct SubsetSample {
  IndexList indices;  // sorted; may repeat when `multiset`
  Index size = 0;
  double lambda = 0.0;
  Algorithm algorithm = Algorithm::RegVol;
  std::uint64_t seed = 0;
  std::uint64_t rejection_trials = 0;
  std::optional<IndexList> removal_order;
  bool multiset = false;
  // 1 / sqrt(s P(i)) per entry of `indices`; LeverageIID only.
  Vector importance_weights;

  friend bool operator==(const SubsetSample&, const SubsetSample&) = default;
};

/// Live state of reverse iterative sampling.
///
/// Rows of the active set are kept packed in a contiguous buffer together
/// with their removal weights h, so the per-step weight update is a single
/// streaming kernel. Removal swaps the last active row into the freed slot.
class DowndateState {
 public:
  enum class Refresh {
    Fixed,         // recompute Z every max(d, 64) downdates
    Proportional,  // ... or every |S|/2 downdates, whichever is larger
  };

  DowndateState(const Matrix& x, std::span<const Index> rows, double lambda,
                Index target_size, bool track_weights,
                Refresh refresh = Refresh::Fixed);
  DowndateState(const Matrix& x, double lambda, Index target_size,
                bool track_weights, Refresh refresh = Refresh::Fixed);

  Index size() const noexcept { return active_.size(); }
  Index dim() const noexcept { return d_; }
  Index target_size() const noexcept { return target_; }
  double lambda() const noexcept { return lambda_; }
  const IndexList& active() const noexcept { return active_; }
  const Matrix& inverse() const noexcept { return z_; }
  bool tracks_weights() const noexcept { return track_; }
  // Maintained h, aligned with active(). Empty unless track_weights.
  std::span<const double> weights() const noexcept { return h_; }
  Index downdates_since_refresh() const noexcept { return since_refresh_; }
  std::span<const double> packed_row(Index pos) const {
    return {rows_.data() + pos * d_, d_};
  }

  // 1 - x^T Z x for the row at `pos`, from the current Z.
  double fresh_weight(Index pos) const;

  /// Removes the active row at `pos` and downdates Z (and h when tracked).
  void remove_at(Index pos);

  /// Recomputes Z (and h) from the active rows.
  void refresh();

 private:
  void init();
  Index refresh_interval() const;

  Index d_ = 0;
  Index target_ = 0;
  double lambda_ = 0.0;
  bool track_ = false;
  Refresh policy_ = Refresh::Fixed;
  IndexList active_;
  std::vector<double> rows_;
  Vector h_;
  Matrix z_;
  Vector scratch_zx_;
  Vector scratch_v_;
  Index since_refresh_ = 0;
  Index size_at_refresh_ = 0;
};

/// Current conditional weights h_i = 1 - x_i^T Z x_i, clamped to [0, 1],
/// aligned with state.active(). Throws Error{AllWeightsZero} when their sum
/// is <= kZeroTotalTolerance while |S| > target size.
Vector removal_weights(const DowndateState& state, const Matrix& x);

/// Position drawn with probability proportional to `weights` by cumulative
/// sum inversion; one uniform draw. Falls back to a uniform position when
/// the clamped total is <= kZeroTotalTolerance.
Index draw_proportional(std::span<const double> weights, Rng& rng);

SubsetSample reg_vol_sample(const Matrix& x, const SamplerConfig& cfg, Rng& rng);
SubsetSample fast_reg_vol_sample(const Matrix& x, const SamplerConfig& cfg,
                                 Rng& rng);
SubsetSample leverage_iid_sample(const Matrix& x, Index s, double lambda,
                                 Rng& rng);

/// Dispatches on cfg.algorithm with an Rng seeded from cfg.seed.
/// Algorithm::Oracle is handled by oracle.hpp's draw_subset.
SubsetSample sample(const Matrix& x, const SamplerConfig& cfg);

/// P(i in S) under size-s volume sampling.
double marginal_probability(const Matrix& x, Index s, Index i);
Vector marginal_probabilities(const Matrix& x, Index s);

}  // namespace volsample
