#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "reference.hpp"
#include "volsample/error.hpp"
#include "volsample/fixtures.hpp"
#include "volsample/linalg.hpp"
#include "volsample/rng.hpp"
#include "volsample/sampling.hpp"

using namespace volsample;

namespace {

const Matrix kDegenerate{{1, 1}, {1, 1}, {1, 0}};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Rng, Deterministic) {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.uniform(), b.uniform());
  EXPECT_NE(Rng::replicate_seed(1, 0), Rng::replicate_seed(1, 1));
  EXPECT_NE(Rng::replicate_seed(1, 0), Rng::replicate_seed(2, 0));
}

TEST(Rng, UniformRange) {
  Rng r(1);
  for (int k = 0; k < 10000; ++k) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(r.uniform_index(7), 7u);
  }
}

TEST(Validate, Rejections) {
  EXPECT_EQ(code_of([] { validate(kDegenerate, {1, 0.0, 0, Algorithm::RegVol}); }),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { validate(kDegenerate, {4, 0.0, 0, Algorithm::RegVol}); }),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { validate(kDegenerate, {2, -1.0, 0, Algorithm::RegVol}); }),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { validate(kDegenerate, {0, 1.0, 0, Algorithm::RegVol}); }),
            ErrorCode::InvalidConfig);
  Matrix bad = kDegenerate;
  bad(0, 0) = std::nan("");
  EXPECT_EQ(code_of([&] { validate(bad, {2, 0.0, 0, Algorithm::RegVol}); }),
            ErrorCode::InvalidConfig);
  // lambda > 0 allows s < d.
  EXPECT_NO_THROW(validate(kDegenerate, {1, 0.5, 0, Algorithm::RegVol}));
}

TEST(Validate, RankDeficientFullSetFails) {
  const Matrix x{{1, 1}, {2, 2}, {3, 3}};
  Rng rng(0);
  EXPECT_EQ(code_of([&] { reg_vol_sample(x, {2, 0.0, 0, Algorithm::RegVol}, rng); }),
            ErrorCode::NotPositiveDefinite);
}

TEST(DowndateState, DegenerateInitialWeights) {
  DowndateState st(kDegenerate, 0.0, 2, true);
  const Vector h = removal_weights(st, kDegenerate);
  EXPECT_NEAR(h[0], 0.5, 1e-14);
  EXPECT_NEAR(h[1], 0.5, 1e-14);
  EXPECT_NEAR(h[2], 0.0, 1e-14);
}

TEST(DowndateState, TrackedWeightsStayExact) {
  const Matrix x = fixtures::gaussian_matrix(40, 4, 17);
  for (double lambda : {0.0, 0.3}) {
    DowndateState st(x, lambda, 4, true);
    Rng rng(5);
    while (st.size() > 6) {
      const Vector w = removal_weights(st, x);
      for (Index p = 0; p < st.size(); ++p) {
        const Index row = st.active()[p];
        const IndexList& act = st.active();
        const Matrix zref = ref::inverse(ref::gram(ref::rows_of(x, act), lambda));
        Vector xi(x.row(row).begin(), x.row(row).end());
        const Vector zx = ref::matvec(zref, xi);
        double q = 0;
        for (Index j = 0; j < xi.size(); ++j) q += xi[j] * zx[j];
        EXPECT_NEAR(st.weights()[p], 1.0 - q, 1e-8);
        EXPECT_LE(st.weights()[p], 1.0 + 1e-12);
        EXPECT_GE(st.weights()[p], -1e-8);
      }
      double sum = 0;
      for (double h : st.weights()) sum += h;
      EXPECT_NEAR(sum, static_cast<double>(st.size()) - 4.0 + lambda * trace(st.inverse()),
                  1e-8);
      st.remove_at(draw_proportional(w, rng));
    }
  }
}

TEST(DowndateState, LargeLambdaGivesUniformWeights) {
  const Matrix x = fixtures::gaussian_matrix(10, 3, 2);
  DowndateState st(x, 1e12, 5, true);
  for (double h : st.weights()) EXPECT_NEAR(h, 1.0, 1e-9);
}

TEST(DrawProportional, ZeroWeightsNeverDrawn) {
  Rng rng(3);
  const Vector w{0.5, 0.0, 0.5, 1e-11};
  for (int k = 0; k < 5000; ++k) {
    const Index i = draw_proportional(w, rng);
    EXPECT_TRUE(i == 0 || i == 2);
  }
}

TEST(DrawProportional, UniformFallback) {
  Rng rng(3);
  std::set<Index> seen;
  for (int k = 0; k < 200; ++k) seen.insert(draw_proportional(Vector(4, 0.0), rng));
  EXPECT_EQ(seen.size(), 4u);
}

TEST(RegVol, DegenerateNeverSamplesZeroVolumePair) {
  std::map<IndexList, int> counts;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    counts[sample(kDegenerate, {2, 0.0, seed, Algorithm::RegVol}).indices]++;
  }
  EXPECT_EQ(counts.count(IndexList{0, 1}), 0u);
  const IndexList a{0, 2}, b{1, 2};
  EXPECT_NEAR(counts[a] / 20000.0, 0.5, 0.02);
  EXPECT_NEAR(counts[b] / 20000.0, 0.5, 0.02);
}

TEST(RegVol, FullSizeReturnsEverything) {
  const Matrix x = fixtures::gaussian_matrix(9, 3, 1);
  for (Algorithm a : {Algorithm::RegVol, Algorithm::FastRegVol}) {
    const SubsetSample s = sample(x, {9, 0.0, 4, a});
    EXPECT_EQ(s.indices, ref::all_rows(9));
    EXPECT_EQ(s.rejection_trials, 0u);
  }
}

TEST(RegVol, SquareIdentityNeedsNoRemovals) {
  const SubsetSample s = sample(Matrix::identity(4), {4, 0.0, 0, Algorithm::RegVol});
  EXPECT_EQ(s.indices, ref::all_rows(4));
  ASSERT_TRUE(s.removal_order.has_value());
  EXPECT_TRUE(s.removal_order->empty());
}

TEST(RegVol, SameSeedSameSubset) {
  const Matrix x = fixtures::gaussian_matrix(200, 5, 8);
  for (Algorithm a : {Algorithm::RegVol, Algorithm::FastRegVol, Algorithm::LeverageIID}) {
    const SamplerConfig cfg{7, 0.0, 1234, a};
    EXPECT_EQ(sample(x, cfg), sample(x, cfg));
  }
}

TEST(RegVol, OutputIsSortedDistinctOfRequestedSize) {
  const Matrix x = fixtures::gaussian_matrix(300, 4, 9);
  for (Algorithm a : {Algorithm::RegVol, Algorithm::FastRegVol}) {
    for (double lambda : {0.0, 2.0}) {
      const SubsetSample s = sample(x, {6, lambda, 3, a});
      EXPECT_EQ(s.indices.size(), 6u);
      EXPECT_TRUE(std::is_sorted(s.indices.begin(), s.indices.end()));
      EXPECT_EQ(std::adjacent_find(s.indices.begin(), s.indices.end()), s.indices.end());
      ASSERT_TRUE(s.removal_order.has_value());
      EXPECT_EQ(s.removal_order->size(), 294u);
    }
  }
}

TEST(RegVol, RegularizedAllowsSmallSubsets) {
  const Matrix x = fixtures::gaussian_matrix(30, 5, 9);
  EXPECT_EQ(sample(x, {2, 1.0, 3, Algorithm::RegVol}).indices.size(), 2u);
  EXPECT_EQ(sample(x, {2, 1.0, 3, Algorithm::FastRegVol}).indices.size(), 2u);
}

TEST(FastRegVol, RejectionTrialsCountedAndBounded) {
  const Matrix x = fixtures::gaussian_matrix(400, 5, 10);
  double total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SubsetSample s = sample(x, {5, 0.0, seed, Algorithm::FastRegVol});
    EXPECT_GE(s.rejection_trials, 400u - 10u);
    total += static_cast<double>(s.rejection_trials);
  }
  EXPECT_LT(total / 20, 2 * 400.0);
}

TEST(Leverage, IdentityGivesUniform) {
  const Matrix x = Matrix::identity(4);
  std::vector<int> counts(4, 0);
  Rng rng(1);
  for (int k = 0; k < 4000; ++k)
    for (Index i : leverage_iid_sample(x, 1, 0.0, rng).indices) counts[i]++;
  for (int c : counts) EXPECT_NEAR(c / 4000.0, 0.25, 0.03);
}

TEST(Leverage, DegenerateLawAndWeights) {
  Rng rng(2);
  std::vector<int> counts(3, 0);
  const int draws = 40000;
  for (int k = 0; k < draws; ++k)
    for (Index i : leverage_iid_sample(kDegenerate, 1, 0.0, rng).indices) counts[i]++;
  const double p[] = {0.25, 0.25, 0.5};
  for (int i = 0; i < 3; ++i) {
    const double se = std::sqrt(p[i] * (1 - p[i]) / draws);
    EXPECT_LE(std::abs(counts[i] / double(draws) - p[i]), 4 * se);
  }
  const SubsetSample s = leverage_iid_sample(kDegenerate, 4, 0.0, rng);
  EXPECT_TRUE(s.multiset);
  for (Index k = 0; k < s.indices.size(); ++k) {
    EXPECT_NEAR(s.importance_weights[k], 1.0 / std::sqrt(4 * p[s.indices[k]]), 1e-12);
  }
}

TEST(Leverage, EmptySample) {
  Rng rng(0);
  const SubsetSample s = leverage_iid_sample(kDegenerate, 0, 0.0, rng);
  EXPECT_TRUE(s.indices.empty());
  EXPECT_TRUE(s.multiset);
}

TEST(Marginals, Examples) {
  for (double p : marginal_probabilities(kDegenerate, 3)) EXPECT_EQ(p, 1.0);
  const Vector m = marginal_probabilities(kDegenerate, 2);
  EXPECT_NEAR(m[0], 0.5, 1e-14);
  EXPECT_NEAR(m[1], 0.5, 1e-14);
  EXPECT_NEAR(m[2], 1.0, 1e-14);
  EXPECT_NEAR(marginal_probability(kDegenerate, 2, 2), 1.0, 1e-14);
}

TEST(Marginals, SizeDIsLeverage) {
  const Matrix x = fixtures::gaussian_matrix(9, 3, 12);
  const Vector m = marginal_probabilities(x, 3);
  const Vector l = leverage_scores(x);
  for (Index i = 0; i < 9; ++i) EXPECT_NEAR(m[i], l[i], 1e-12);
}

TEST(Marginals, MatchBruteForceEnumeration) {
  const Matrix x = fixtures::gaussian_matrix(8, 2, 13);
  for (Index s = 2; s <= 8; ++s) {
    Vector brute(8, 0.0);
    for (const auto& [subset, p] : ref::volume_law(x, s))
      for (Index i : subset) brute[i] += p;
    const Vector m = marginal_probabilities(x, s);
    for (Index i = 0; i < 8; ++i) EXPECT_NEAR(m[i], brute[i], 1e-12) << "s=" << s;
  }
}

TEST(Algorithm, NamesRoundTrip) {
  for (Algorithm a : {Algorithm::RegVol, Algorithm::FastRegVol, Algorithm::LeverageIID,
                      Algorithm::Oracle})
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_THROW(parse_algorithm("nope"), Error);
}
