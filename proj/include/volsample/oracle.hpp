#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "volsample/fixtures.hpp"
#include "volsample/matrix.hpp"
#include "volsample/rng.hpp"
#include "volsample/sampling.hpp"

namespace volsample {

// Exact enumeration is refused beyond this many subsets rather than
// silently truncated.
inline constexpr std::size_t kMaxEnumeration = 1'000'000;

inline constexpr double kIdentityTolerance = 1e-9;
inline constexpr double kPsdTolerance = -1e-9;

enum class OracleMethod { ClosedFormDet, DagPropagation };

std::string_view to_string(OracleMethod m);

struct SubsetProbability {
  IndexList subset;  // sorted
  double log_prob;   // -inf for zero-probability subsets
};

/// Exact law over all size-s subsets of {0..n-1}, listed in lexicographic
/// order.
class ExactSubsetDistribution {
 public:
  ExactSubsetDistribution(Index n, Index s, double lambda, OracleMethod method,
                          std::vector<SubsetProbability> entries,
                          double log_normalizer);

  Index n() const noexcept { return n_; }
  Index s() const noexcept { return s_; }
  double lambda() const noexcept { return lambda_; }
  OracleMethod method() const noexcept { return method_; }
  const std::vector<SubsetProbability>& entries() const noexcept {
    return entries_;
  }
  // log sum_S det(X_S^T X_S) for ClosedFormDet, NaN otherwise.
  double log_normalizer() const noexcept { return log_normalizer_; }

  double probability(std::span<const Index> subset) const;
  double log_total() const;

  /// One subset drawn from the law (one uniform draw).
  IndexList draw(Rng& rng) const;

 private:
  Index n_, s_;
  double lambda_;
  OracleMethod method_;
  std::vector<SubsetProbability> entries_;
  std::unordered_map<std::uint64_t, Index> lookup_;
  double log_normalizer_;
};

std::uint64_t subset_mask(std::span<const Index> subset);

/// Calls fn(subset) for every size-s subset of {0..n-1} in lexicographic
/// order.
void for_each_subset(Index n, Index s,
                     const std::function<void(const IndexList&)>& fn);
double binomial(Index n, Index k);

/// Exact law of (lambda-regularized) size-s volume sampling.
/// Defaults to ClosedFormDet for lambda == 0 and DagPropagation otherwise.
/// Throws Error{TooLarge}, Error{NotPositiveDefinite} (lambda == 0 with
/// rank(X) < d), Error{InvalidConfig}, Error{UnsupportedCombination}
/// (ClosedFormDet with lambda > 0).
ExactSubsetDistribution exact_distribution(
    const Matrix& x, Index s, double lambda,
    std::optional<OracleMethod> method = std::nullopt);

/// A node of the reverse-iterative DAG with its outgoing weights
/// h_i = det(Z(S-i)) / det(Z(S)), Z(S) = X_S^T X_S + lambda I.
struct DagNode {
  IndexList subset;
  double probability;
  Vector weights;  // aligned with subset
  Matrix inverse;  // Z(S)^{-1}
};

/// Propagates path probabilities level by level from {0..n-1} down to size
/// s, calling visit on every node with |S| > s and positive probability.
/// Returns the final level's probabilities keyed by subset mask.
std::map<std::uint64_t, double> propagate_dag(
    const Matrix& x, Index s, double lambda,
    const std::function<void(const DagNode&)>& visit = {});

enum class IdentityId {
  PseudoinverseUnbiased,
  CovInverse,
  Frobenius,
  Covariance,
  ProjSquare,
  LossFactor,
  Marginals,
  Composition,
  RegInverseBound,
  Normalization,
  CauchyBinet,
};

std::string_view to_string(IdentityId id);
IdentityId parse_identity(std::string_view name);
std::span<const IdentityId> all_identities();

struct IdentityReport {
  IdentityId id = IdentityId::CauchyBinet;
  Index n = 0, d = 0, s = 0;
  double lambda = 0.0;
  Matrix lhs, rhs;
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
  // Smallest eigenvalue of rhs - lhs for inequality checks.
  std::optional<double> psd_margin;
  bool equality = true;  // which mode was checked
  bool passed = false;
};

/// Sum_S det(X_S^T X_S) against C(n-d, s-d) det(X^T X), compared in log
/// space.
IdentityReport cauchy_binet_check(const Matrix& x, Index s);

/// Evaluates one catalog identity by exact enumeration. Degenerate fixtures
/// are checked in inequality mode where the identity degrades to a PSD
/// bound. `y` is required by LossFactor only.
///
/// Throws Error{UnsupportedCombination} for ProjSquare/LossFactor with
/// s != d, lambda > 0 with a lambda = 0 identity, RegInverseBound with
/// s < d_lambda, or LossFactor without responses.
IdentityReport verify_identity(IdentityId id, const Matrix& x,
                               std::span<const double> y, Index s,
                               double lambda,
                               Position position = Position::General);

/// tr(X (X^T X + lambda I)^{-1} X^T) = sum_i ev_i / (ev_i + lambda).
double d_lambda(const Matrix& x, double lambda);

/// Draws a subset with any algorithm, including the exact oracle.
SubsetSample draw_subset(const Matrix& x, const SamplerConfig& cfg, Rng& rng);

struct EmpiricalReport {
  Algorithm algorithm = Algorithm::RegVol;
  Index draws = 0;
  double tv_distance = 0.0;
  double chi_square = 0.0;
  Index cells = 0;  // cells with positive exact probability
  std::uint64_t impossible_draws = 0;
  std::map<IndexList, std::uint64_t> counts;
  Vector empirical_marginals;
  Vector expected_marginals;
  double max_marginal_z = 0.0;
  double mean_rejection_trials = 0.0;
  double rejection_trials_se = 0.0;
};

/// Runs `draws` independent samplers (replicate seeds derived from cfg.seed)
/// and compares their empirical law with the exact one. For LeverageIID the
/// cells are single indices and the reference is the leverage law.
EmpiricalReport empirical_distribution_test(const Matrix& x,
                                            const SamplerConfig& cfg,
                                            Index draws);

}  // namespace volsample
