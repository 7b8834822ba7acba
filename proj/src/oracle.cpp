#include "volsample/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "volsample/error.hpp"
#include "volsample/linalg.hpp"
#include "volsample/regression.hpp"

namespace volsample {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// log det(X_S^T X_S + lambda I), -inf when singular at the pivot tolerance.
double subset_logdet(const Matrix& x, std::span<const Index> subset,
                     double lambda) {
  try {
    return chol_logdet(gram(select_rows(x, subset), lambda));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    return kNegInf;
  }
}

void require_full_rank(const Matrix& x) {
  (void)Cholesky(gram(x));  // throws NotPositiveDefinite
}

void check_sizes(const Matrix& x, Index s, double lambda) {
  if (x.rows() > 63) {
    throw Error(ErrorCode::TooLarge, "exact enumeration supports n <= 63");
  }
  SamplerConfig cfg{s, lambda, 0, Algorithm::RegVol};
  validate(x, cfg);
}

IndexList mask_to_subset(std::uint64_t mask) {
  IndexList out;
  for (Index i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

}  // namespace

std::string_view to_string(OracleMethod m) {
  return m == OracleMethod::ClosedFormDet ? "closed-form-det" : "dag-propagation";
}

std::uint64_t subset_mask(std::span<const Index> subset) {
  std::uint64_t m = 0;
  for (Index i : subset) m |= std::uint64_t{1} << i;
  return m;
}

double binomial(Index n, Index k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (Index i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

void for_each_subset(Index n, Index s,
                     const std::function<void(const IndexList&)>& fn) {
  if (s > n) return;
  IndexList idx(s);
  for (Index k = 0; k < s; ++k) idx[k] = k;
  for (;;) {
    fn(idx);
    Index k = s;
    while (k > 0 && idx[k - 1] == n - s + (k - 1)) --k;
    if (k == 0) return;
    ++idx[k - 1];
    for (Index j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// ---------------------------------------------------------------------------
// ExactSubsetDistribution

ExactSubsetDistribution::ExactSubsetDistribution(
    Index n, Index s, double lambda, OracleMethod method,
    std::vector<SubsetProbability> entries, double log_normalizer)
    : n_(n),
      s_(s),
      lambda_(lambda),
      method_(method),
      entries_(std::move(entries)),
      log_normalizer_(log_normalizer) {
  lookup_.reserve(entries_.size());
  for (Index k = 0; k < entries_.size(); ++k)
    lookup_.emplace(subset_mask(entries_[k].subset), k);
}

double ExactSubsetDistribution::probability(std::span<const Index> subset) const {
  auto it = lookup_.find(subset_mask(subset));
  if (it == lookup_.end()) return 0.0;
  return std::exp(entries_[it->second].log_prob);
}

double ExactSubsetDistribution::log_total() const {
  Vector lp;
  lp.reserve(entries_.size());
  for (const auto& e : entries_) lp.push_back(e.log_prob);
  return log_sum_exp(lp);
}

IndexList ExactSubsetDistribution::draw(Rng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  const SubsetProbability* last = nullptr;
  for (const auto& e : entries_) {
    if (e.log_prob == kNegInf) continue;
    acc += std::exp(e.log_prob);
    last = &e;
    if (u < acc) return e.subset;
  }
  return last ? last->subset : IndexList{};
}

// ---------------------------------------------------------------------------

std::map<std::uint64_t, double> propagate_dag(
    const Matrix& x, Index s, double lambda,
    const std::function<void(const DagNode&)>& visit) {
  const Index n = x.rows();
  std::map<std::uint64_t, double> level;
  level.emplace(n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1, 1.0);

  for (Index t = n; t > s; --t) {
    std::map<std::uint64_t, double> next;
    for (const auto& [mask, prob] : level) {
      if (prob <= 0.0) continue;
      DagNode node;
      node.subset = mask_to_subset(mask);
      node.probability = prob;
      const double base = subset_logdet(x, node.subset, lambda);
      node.weights.assign(t, 0.0);
      double total = 0.0;
      if (base != kNegInf) {
        IndexList rest(t - 1);
        for (Index k = 0; k < t; ++k) {
          std::copy(node.subset.begin(), node.subset.begin() + k, rest.begin());
          std::copy(node.subset.begin() + k + 1, node.subset.end(),
                    rest.begin() + k);
          const double ld = subset_logdet(x, rest, lambda);
          node.weights[k] = ld == kNegInf ? 0.0 : std::exp(ld - base);
          total += node.weights[k];
        }
        node.inverse =
            inverse_spd(gram(select_rows(x, node.subset), lambda)).matrix();
      }
      if (visit) visit(node);

      for (Index k = 0; k < t; ++k) {
        const double cond = total > kZeroTotalTolerance
                                ? node.weights[k] / total
                                : 1.0 / static_cast<double>(t);
        if (cond <= 0.0) continue;
        next[mask & ~(std::uint64_t{1} << node.subset[k])] += prob * cond;
      }
    }
    level = std::move(next);
  }
  return level;
}

ExactSubsetDistribution exact_distribution(const Matrix& x, Index s,
                                           double lambda,
                                           std::optional<OracleMethod> method) {
  check_sizes(x, s, lambda);
  const Index n = x.rows();
  const OracleMethod m = method.value_or(
      lambda == 0.0 ? OracleMethod::ClosedFormDet : OracleMethod::DagPropagation);
  if (m == OracleMethod::ClosedFormDet && lambda != 0.0) {
    throw Error(ErrorCode::UnsupportedCombination,
                "closed-form volume sampling law requires lambda = 0");
  }
  if (lambda == 0.0) require_full_rank(x);

  std::vector<SubsetProbability> entries;
  if (m == OracleMethod::ClosedFormDet) {
    if (binomial(n, s) > static_cast<double>(kMaxEnumeration)) {
      throw Error(ErrorCode::TooLarge, "C(n, s) exceeds the enumeration limit");
    }
    Vector lds;
    for_each_subset(n, s, [&](const IndexList& subset) {
      const double ld = subset_logdet(x, subset, 0.0);
      entries.push_back({subset, ld});
      lds.push_back(ld);
    });
    const double log_z = log_sum_exp(lds);
    for (auto& e : entries) e.log_prob -= log_z;
    return {n, s, lambda, m, std::move(entries), log_z};
  }

  double nodes = 0.0;
  for (Index t = s; t <= n; ++t) nodes += binomial(n, t);
  if (nodes > static_cast<double>(kMaxEnumeration)) {
    throw Error(ErrorCode::TooLarge, "DAG size exceeds the enumeration limit");
  }
  const auto final_level = propagate_dag(x, s, lambda);
  for_each_subset(n, s, [&](const IndexList& subset) {
    auto it = final_level.find(subset_mask(subset));
    const double p = it == final_level.end() ? 0.0 : it->second;
    entries.push_back({subset, p > 0.0 ? std::log(p) : kNegInf});
  });
  return {n, s, lambda, m, std::move(entries),
          std::numeric_limits<double>::quiet_NaN()};
}

double d_lambda(const Matrix& x, double lambda) {
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "lambda must be >= 0");
  }
  if (lambda == 0.0) require_full_rank(x);
  const Vector ev = symmetric_eigenvalues(gram(x).matrix());
  double total = 0.0;
  for (double e : ev) {
    const double pos = std::max(e, 0.0);
    if (pos + lambda > 0.0) total += pos / (pos + lambda);
  }
  return total;
}

SubsetSample draw_subset(const Matrix& x, const SamplerConfig& cfg, Rng& rng) {
  switch (cfg.algorithm) {
    case Algorithm::RegVol: return reg_vol_sample(x, cfg, rng);
    case Algorithm::FastRegVol: return fast_reg_vol_sample(x, cfg, rng);
    case Algorithm::LeverageIID:
      return leverage_iid_sample(x, cfg.target_size, cfg.lambda, rng);
    case Algorithm::Oracle: {
      const auto dist = exact_distribution(x, cfg.target_size, cfg.lambda);
      SubsetSample out;
      out.indices = dist.draw(rng);
      out.size = out.indices.size();
      out.lambda = cfg.lambda;
      out.algorithm = Algorithm::Oracle;
      out.seed = cfg.seed;
      return out;
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown algorithm");
}

// ---------------------------------------------------------------------------
// Identity catalog

namespace {

struct IdentityName {
  IdentityId id;
  std::string_view name;
};

constexpr IdentityName kIdentityNames[] = {
    {IdentityId::PseudoinverseUnbiased, "PSEUDOINV_UNBIASED"},
    {IdentityId::CovInverse, "COV_INVERSE"},
    {IdentityId::Frobenius, "FROBENIUS"},
    {IdentityId::Covariance, "COVARIANCE"},
    {IdentityId::ProjSquare, "PROJ_SQUARE"},
    {IdentityId::LossFactor, "LOSS_FACTOR"},
    {IdentityId::Marginals, "MARGINALS"},
    {IdentityId::Composition, "COMPOSITION"},
    {IdentityId::RegInverseBound, "REG_INVERSE_BOUND"},
    {IdentityId::Normalization, "NORMALIZATION"},
    {IdentityId::CauchyBinet, "CAUCHY_BINET"},
};

constexpr IdentityId kAllIdentities[] = {
    IdentityId::PseudoinverseUnbiased, IdentityId::CovInverse,
    IdentityId::Frobenius,             IdentityId::Covariance,
    IdentityId::ProjSquare,            IdentityId::LossFactor,
    IdentityId::Marginals,             IdentityId::Composition,
    IdentityId::RegInverseBound,       IdentityId::Normalization,
    IdentityId::CauchyBinet,
};

Matrix scalar(double v) { return Matrix(1, 1, v); }

Matrix row_matrix(std::span<const double> v) {
  return Matrix(1, v.size(), Vector(v.begin(), v.end()));
}

// Fills deviations and the verdict. `scale_floor` guards the relative
// deviation when both sides are (near) zero.
void finalize(IdentityReport& r, bool equality, double scale_floor = 0.0) {
  r.equality = equality;
  r.max_abs_dev = max_abs_diff(r.lhs, r.rhs);
  const double scale =
      std::max({max_abs(r.rhs), max_abs(r.lhs), scale_floor});
  r.max_rel_dev = scale > 0.0 ? r.max_abs_dev / scale : 0.0;
  if (equality) {
    r.passed = r.max_rel_dev <= kIdentityTolerance;
  } else {
    const Matrix gap = r.rhs - r.lhs;
    r.psd_margin = gap.rows() == gap.cols()
                       ? min_eigenvalue(gap)
                       : *std::min_element(gap.data().begin(), gap.data().end());
    r.passed = *r.psd_margin >= kPsdTolerance;
  }
}

// Per-subset quantities for every positive-probability size-s subset.
struct WeightedSubset {
  IndexList subset;
  double prob;
  Matrix gram_inverse;  // (X_S^T X_S)^{-1}
  Matrix pinv;          // (I_S X)^+, d x n
};

std::vector<WeightedSubset> volume_support(const Matrix& x, Index s) {
  const auto dist = exact_distribution(x, s, 0.0, OracleMethod::ClosedFormDet);
  std::vector<WeightedSubset> out;
  for (const auto& e : dist.entries()) {
    if (e.log_prob == kNegInf) continue;
    WeightedSubset w;
    w.subset = e.subset;
    w.prob = std::exp(e.log_prob);
    const Matrix xs = select_rows(x, e.subset);
    w.gram_inverse = inverse_spd(gram(xs)).matrix();
    const Matrix ps = w.gram_inverse * xs.transpose();  // d x s
    w.pinv = Matrix(x.cols(), x.rows());
    for (Index j = 0; j < x.cols(); ++j)
      for (Index k = 0; k < e.subset.size(); ++k)
        w.pinv(j, e.subset[k]) = ps(j, k);
    out.push_back(std::move(w));
  }
  return out;
}

IdentityReport composition_check(const Matrix& x, Index s) {
  const Index n = x.rows();
  const auto one_stage = exact_distribution(x, s, 0.0);
  IdentityReport r;
  const Index levels = n - s;
  const Index cells = one_stage.entries().size();
  r.lhs = Matrix(levels, cells);
  r.rhs = Matrix(levels, cells);

  for (Index t = s + 1; t <= n; ++t) {
    const auto outer = exact_distribution(x, t, 0.0);
    std::unordered_map<std::uint64_t, double> two_stage;
    for (const auto& te : outer.entries()) {
      if (te.log_prob == kNegInf) continue;
      const double pt = std::exp(te.log_prob);
      const Matrix xt = select_rows(x, te.subset);
      const auto inner = exact_distribution(xt, s, 0.0);
      for (const auto& se : inner.entries()) {
        if (se.log_prob == kNegInf) continue;
        IndexList original(se.subset.size());
        for (Index k = 0; k < se.subset.size(); ++k)
          original[k] = te.subset[se.subset[k]];
        two_stage[subset_mask(original)] += pt * std::exp(se.log_prob);
      }
    }
    const Index row = t - s - 1;
    for (Index c = 0; c < cells; ++c) {
      const auto& e = one_stage.entries()[c];
      r.rhs(row, c) = e.log_prob == kNegInf ? 0.0 : std::exp(e.log_prob);
      auto it = two_stage.find(subset_mask(e.subset));
      r.lhs(row, c) = it == two_stage.end() ? 0.0 : it->second;
    }
  }
  finalize(r, true, 1.0);
  return r;
}

}  // namespace

std::string_view to_string(IdentityId id) {
  for (const auto& e : kIdentityNames)
    if (e.id == id) return e.name;
  return "UNKNOWN";
}

IdentityId parse_identity(std::string_view name) {
  for (const auto& e : kIdentityNames)
    if (e.name == name) return e.id;
  throw Error(ErrorCode::InvalidConfig,
              "unknown identity '" + std::string(name) + "'");
}

std::span<const IdentityId> all_identities() { return kAllIdentities; }

IdentityReport cauchy_binet_check(const Matrix& x, Index s) {
  const Index n = x.rows(), d = x.cols();
  const auto dist = exact_distribution(x, s, 0.0, OracleMethod::ClosedFormDet);
  const double log_lhs = dist.log_normalizer();
  const double log_rhs =
      std::log(binomial(n - d, s - d)) + chol_logdet(gram(x));
  IdentityReport r;
  r.id = IdentityId::CauchyBinet;
  r.n = n;
  r.d = d;
  r.s = s;
  r.lhs = scalar(std::exp(log_lhs));
  r.rhs = scalar(std::exp(log_rhs));
  r.equality = true;
  r.max_abs_dev = std::abs(r.lhs(0, 0) - r.rhs(0, 0));
  r.max_rel_dev = std::abs(std::expm1(log_lhs - log_rhs));
  r.passed = r.max_rel_dev <= kIdentityTolerance;
  return r;
}

IdentityReport verify_identity(IdentityId id, const Matrix& x,
                               std::span<const double> y, Index s,
                               double lambda, Position position) {
  const Index n = x.rows(), d = x.cols();
  const bool lambda_identity =
      id == IdentityId::RegInverseBound || id == IdentityId::Normalization;
  if (!lambda_identity && lambda != 0.0) {
    throw Error(ErrorCode::UnsupportedCombination,
                std::string(to_string(id)) + " is stated for lambda = 0");
  }
  if ((id == IdentityId::ProjSquare || id == IdentityId::LossFactor) && s != d) {
    throw Error(ErrorCode::UnsupportedCombination,
                std::string(to_string(id)) + " holds only at s = d");
  }
  if (id == IdentityId::LossFactor && y.size() != n) {
    throw Error(ErrorCode::UnsupportedCombination,
                "LOSS_FACTOR needs a response vector of length n");
  }
  check_sizes(x, s, lambda);
  if (id == IdentityId::CauchyBinet) return cauchy_binet_check(x, s);

  const bool general = position == Position::General;
  const double nd = static_cast<double>(n), dd = static_cast<double>(d),
               sd = static_cast<double>(s);

  IdentityReport r;
  r.id = id;
  r.n = n;
  r.d = d;
  r.s = s;
  r.lambda = lambda;

  switch (id) {
    case IdentityId::PseudoinverseUnbiased: {
      r.lhs = Matrix(d, n);
      for (const auto& w : volume_support(x, s)) r.lhs += w.prob * w.pinv;
      r.rhs = pseudoinverse(x);
      finalize(r, true);
      break;
    }
    case IdentityId::CovInverse: {
      r.lhs = Matrix(d, d);
      for (const auto& w : volume_support(x, s)) r.lhs += w.prob * w.gram_inverse;
      r.rhs = ((nd - dd + 1) / (sd - dd + 1)) * inverse_spd(gram(x)).matrix();
      finalize(r, general);
      break;
    }
    case IdentityId::Frobenius: {
      double e = 0.0;
      for (const auto& w : volume_support(x, s))
        e += w.prob * squared_norm(w.pinv.data());
      r.lhs = scalar(e);
      r.rhs = scalar(((nd - dd + 1) / (sd - dd + 1)) *
                     squared_norm(pseudoinverse(x).data()));
      finalize(r, general);
      break;
    }
    case IdentityId::Covariance: {
      const Matrix xp = pseudoinverse(x);
      const Matrix base = xp * xp.transpose();
      Matrix second(d, d);
      for (const auto& w : volume_support(x, s))
        second += w.prob * (w.pinv * w.pinv.transpose());
      r.lhs = second - base;
      r.rhs = ((nd - sd) / (sd - dd + 1)) * base;
      finalize(r, general, max_abs(base));
      break;
    }
    case IdentityId::ProjSquare: {
      const Matrix proj = x * pseudoinverse(x);
      Matrix second(n, n);
      for (const auto& w : volume_support(x, s)) {
        const Matrix m = x * w.pinv;
        second += w.prob * (m.transpose() * m);
      }
      r.lhs = second - proj;
      r.rhs = dd * (Matrix::identity(n) - proj);
      finalize(r, general, 1.0);
      break;
    }
    case IdentityId::LossFactor: {
      const RegressionProblem p{x, Vector(y.begin(), y.end())};
      double e = 0.0;
      for (const auto& w : volume_support(x, s))
        e += w.prob * total_loss(p, w.pinv * y);
      r.lhs = scalar(e);
      r.rhs = scalar((dd + 1) * total_loss(p, solve_full(p)));
      finalize(r, general);
      break;
    }
    case IdentityId::Marginals: {
      Vector emp(n, 0.0);
      for (const auto& w : volume_support(x, s))
        for (Index i : w.subset) emp[i] += w.prob;
      r.lhs = row_matrix(emp);
      r.rhs = row_matrix(marginal_probabilities(x, s));
      finalize(r, true, 1.0);
      break;
    }
    case IdentityId::Composition: {
      IdentityReport c = composition_check(x, s);
      c.id = id;
      c.n = n;
      c.d = d;
      c.s = s;
      return c;
    }
    case IdentityId::RegInverseBound: {
      const double dl = d_lambda(x, lambda);
      if (sd < dl - 1e-12) {
        throw Error(ErrorCode::UnsupportedCombination,
                    "REG_INVERSE_BOUND requires s >= d_lambda");
      }
      r.lhs = Matrix(d, d);
      const auto dist = exact_distribution(x, s, lambda,
                                           OracleMethod::DagPropagation);
      for (const auto& e : dist.entries()) {
        if (e.log_prob == kNegInf) continue;
        r.lhs += std::exp(e.log_prob) *
                 inverse_spd(gram(select_rows(x, e.subset), lambda)).matrix();
      }
      r.rhs = ((nd - dl + 1) / (sd - dl + 1)) *
              inverse_spd(gram(x, lambda)).matrix();
      finalize(r, false);
      break;
    }
    case IdentityId::Normalization: {
      Vector lhs, rhs;
      propagate_dag(x, s, lambda, [&](const DagNode& node) {
        if (node.inverse.empty()) return;
        double sum = 0.0;
        for (double h : node.weights) sum += h;
        lhs.push_back(sum);
        rhs.push_back(static_cast<double>(node.subset.size()) - dd +
                      lambda * trace(node.inverse));
      });
      r.lhs = row_matrix(lhs);
      r.rhs = row_matrix(rhs);
      finalize(r, true, 1.0);
      break;
    }
    case IdentityId::CauchyBinet:
      break;
  }
  return r;
}

// ---------------------------------------------------------------------------

EmpiricalReport empirical_distribution_test(const Matrix& x,
                                            const SamplerConfig& cfg,
                                            Index draws) {
  if (draws == 0) {
    throw Error(ErrorCode::InvalidConfig, "need at least one draw");
  }
  validate(x, cfg);
  const Index n = x.rows();
  const bool iid = cfg.algorithm == Algorithm::LeverageIID;

  std::optional<ExactSubsetDistribution> exact;
  if (!iid) exact.emplace(exact_distribution(x, cfg.target_size, cfg.lambda));

  std::vector<IndexList> results(draws);
  std::vector<std::uint64_t> trials(draws, 0);
  std::vector<std::exception_ptr> errors(draws);
#pragma omp parallel for schedule(dynamic, 256)
  for (long k = 0; k < static_cast<long>(draws); ++k) {
    try {
      Rng rng = Rng::for_replicate(cfg.seed, static_cast<std::uint64_t>(k));
      if (cfg.algorithm == Algorithm::Oracle) {
        results[k] = exact->draw(rng);
      } else {
        SubsetSample smp = draw_subset(x, cfg, rng);
        trials[k] = smp.rejection_trials;
        results[k] = std::move(smp.indices);
      }
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  EmpiricalReport rep;
  rep.algorithm = cfg.algorithm;
  rep.draws = draws;
  const double nd = static_cast<double>(draws);

  if (iid) {
    const Vector scores = leverage_scores(x, cfg.lambda);
    double total = 0.0;
    for (double v : scores) total += v;
    std::vector<std::uint64_t> per_index(n, 0);
    std::uint64_t picks = 0;
    for (const auto& r : results)
      for (Index i : r) {
        ++per_index[i];
        ++picks;
      }
    rep.empirical_marginals.resize(n);
    rep.expected_marginals.resize(n);
    for (Index i = 0; i < n; ++i) {
      const double p = scores[i] / total;
      const double f = picks ? static_cast<double>(per_index[i]) / picks : 0.0;
      rep.counts[IndexList{i}] = per_index[i];
      rep.empirical_marginals[i] = f;
      rep.expected_marginals[i] = p;
      rep.tv_distance += 0.5 * std::abs(f - p);
      if (p > 0.0) {
        const double ex = p * static_cast<double>(picks);
        rep.chi_square += (per_index[i] - ex) * (per_index[i] - ex) / ex;
        ++rep.cells;
        const double se = std::sqrt(p * (1 - p) / static_cast<double>(picks));
        if (se > 0) rep.max_marginal_z = std::max(rep.max_marginal_z, std::abs(f - p) / se);
      } else if (per_index[i] > 0) {
        rep.impossible_draws += per_index[i];
      }
    }
    return rep;
  }

  std::unordered_map<std::uint64_t, std::uint64_t> by_mask;
  for (const auto& r : results) {
    ++by_mask[subset_mask(r)];
    ++rep.counts[r];
  }
  Vector membership(n, 0.0);
  for (const auto& r : results)
    for (Index i : r) membership[i] += 1.0;

  Vector expected_membership(n, 0.0);
  for (const auto& e : exact->entries()) {
    const double p = e.log_prob == kNegInf ? 0.0 : std::exp(e.log_prob);
    auto it = by_mask.find(subset_mask(e.subset));
    const double obs = it == by_mask.end() ? 0.0 : static_cast<double>(it->second);
    rep.tv_distance += 0.5 * std::abs(obs / nd - p);
    if (p > 0.0) {
      ++rep.cells;
      rep.chi_square += (obs - nd * p) * (obs - nd * p) / (nd * p);
      for (Index i : e.subset) expected_membership[i] += p;
    } else {
      rep.impossible_draws += static_cast<std::uint64_t>(obs);
    }
  }

  rep.expected_marginals = cfg.lambda == 0.0
                               ? marginal_probabilities(x, cfg.target_size)
                               : expected_membership;
  rep.empirical_marginals.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double f = membership[i] / nd;
    const double p = rep.expected_marginals[i];
    rep.empirical_marginals[i] = f;
    const double se = std::sqrt(std::max(p * (1 - p), 0.0) / nd);
    const double z = se > 1e-15 ? std::abs(f - p) / se
                                : (std::abs(f - p) > 1e-12
                                       ? std::numeric_limits<double>::infinity()
                                       : 0.0);
    rep.max_marginal_z = std::max(rep.max_marginal_z, z);
  }

  double sum = 0.0, sum_sq = 0.0;
  for (auto t : trials) {
    sum += static_cast<double>(t);
    sum_sq += static_cast<double>(t) * static_cast<double>(t);
  }
  rep.mean_rejection_trials = sum / nd;
  const double var = draws > 1 ? (sum_sq - sum * sum / nd) / (nd - 1) : 0.0;
  rep.rejection_trials_se = std::sqrt(std::max(var, 0.0) / nd);
  return rep;
}

}  // namespace volsample
