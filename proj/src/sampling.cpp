#include "volsample/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volsample/error.hpp"
#include "volsample/kernels.hpp"
#include "volsample/linalg.hpp"

namespace volsample {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::RegVol: return "regvol";
    case Algorithm::FastRegVol: return "fastregvol";
    case Algorithm::LeverageIID: return "leverage";
    case Algorithm::Oracle: return "oracle";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "regvol") return Algorithm::RegVol;
  if (name == "fastregvol") return Algorithm::FastRegVol;
  if (name == "leverage") return Algorithm::LeverageIID;
  if (name == "oracle") return Algorithm::Oracle;
  throw Error(ErrorCode::InvalidConfig,
              "unknown algorithm '" + std::string(name) + "'");
}

void validate(const Matrix& x, const SamplerConfig& cfg) {
  const Index n = x.rows(), d = x.cols();
  if (n == 0 || d == 0) {
    throw Error(ErrorCode::InvalidConfig, "design matrix is empty");
  }
  if (!x.all_finite()) {
    throw Error(ErrorCode::InvalidConfig, "design matrix has non-finite entries");
  }
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw Error(ErrorCode::InvalidConfig, "lambda must be finite and >= 0");
  }
  if (cfg.algorithm == Algorithm::LeverageIID) return;
  const Index s = cfg.target_size;
  if (s > n) {
    throw Error(ErrorCode::InvalidConfig,
                "sample size " + std::to_string(s) + " exceeds n=" +
                    std::to_string(n));
  }
  if (cfg.lambda == 0.0 && s < d) {
    throw Error(ErrorCode::InvalidConfig,
                "unregularized volume sampling needs s >= d (s=" +
                    std::to_string(s) + ", d=" + std::to_string(d) + ")");
  }
  if (s == 0) {
    throw Error(ErrorCode::InvalidConfig, "sample size must be at least 1");
  }
}

// ---------------------------------------------------------------------------
// DowndateState

DowndateState::DowndateState(const Matrix& x, std::span<const Index> rows,
                             double lambda, Index target_size,
                             bool track_weights, Refresh refresh)
    : d_(x.cols()),
      target_(target_size),
      lambda_(lambda),
      track_(track_weights),
      policy_(refresh),
      active_(rows.begin(), rows.end()) {
  rows_.reserve(active_.size() * d_);
  for (Index i : active_) {
    auto r = x.row(i);
    rows_.insert(rows_.end(), r.begin(), r.end());
  }
  init();
}

DowndateState::DowndateState(const Matrix& x, double lambda, Index target_size,
                             bool track_weights, Refresh refresh)
    : d_(x.cols()),
      target_(target_size),
      lambda_(lambda),
      track_(track_weights),
      policy_(refresh),
      rows_(x.data()) {
  active_.resize(x.rows());
  for (Index i = 0; i < active_.size(); ++i) active_[i] = i;
  init();
}

void DowndateState::init() {
  scratch_zx_.assign(d_, 0.0);
  scratch_v_.assign(d_, 0.0);
  refresh();
}

void DowndateState::refresh() {
  Matrix g = kernels::parallel::gram(rows_, d_);
  for (Index i = 0; i < d_; ++i) g(i, i) += lambda_;
  z_ = Cholesky(SpdMatrix(std::move(g))).inverse().matrix();
  if (track_) {
    h_.assign(active_.size(), 0.0);
    kernels::parallel::quadratic_forms(rows_, d_, z_, h_);
    for (double& v : h_) v = 1.0 - v;
  }
  since_refresh_ = 0;
  size_at_refresh_ = active_.size();
}

Index DowndateState::refresh_interval() const {
  const Index fixed = std::max<Index>(d_, 64);
  if (policy_ == Refresh::Fixed) return fixed;
  return std::max(fixed, size_at_refresh_ / 2);
}

double DowndateState::fresh_weight(Index pos) const {
  return 1.0 - quadratic_form(z_, packed_row(pos));
}

void DowndateState::remove_at(Index pos) {
  const Index last = active_.size() - 1;
  Vector x(packed_row(pos).begin(), packed_row(pos).end());
  for (Index j = 0; j < d_; ++j) scratch_zx_[j] = dot(z_.row(j), x);
  const double hi = 1.0 - dot(x, scratch_zx_);

  if (pos != last) {
    active_[pos] = active_[last];
    std::copy_n(rows_.begin() + last * d_, d_, rows_.begin() + pos * d_);
    if (track_) h_[pos] = h_[last];
  }
  active_.pop_back();
  rows_.resize(last * d_);
  if (track_) h_.pop_back();

  downdate_inverse_inplace(z_, scratch_zx_, hi);
  if (track_) {
    const double scale = 1.0 / std::sqrt(hi);
    for (Index j = 0; j < d_; ++j) scratch_v_[j] = scratch_zx_[j] * scale;
    kernels::parallel::subtract_squared_projections(rows_, d_, scratch_v_, h_);
  }

  if (++since_refresh_ >= refresh_interval() && !active_.empty()) refresh();
}

// ---------------------------------------------------------------------------

namespace {

double clamp_weight(double h) {
  if (!(h > kZeroWeightTolerance)) return 0.0;
  return std::min(h, 1.0);
}

void run_reg_vol(DowndateState& st, Rng& rng, IndexList& order) {
  while (st.size() > st.target_size()) {
    const Index pos = draw_proportional(st.weights(), rng);
    order.push_back(st.active()[pos]);
    st.remove_at(pos);
  }
}

SubsetSample finish(const DowndateState& st, const SamplerConfig& cfg,
                    Algorithm algo, IndexList order, std::uint64_t trials) {
  SubsetSample out;
  out.indices = st.active();
  std::sort(out.indices.begin(), out.indices.end());
  out.size = out.indices.size();
  out.lambda = cfg.lambda;
  out.algorithm = algo;
  out.seed = cfg.seed;
  out.rejection_trials = trials;
  out.removal_order = std::move(order);
  return out;
}

}  // namespace

Vector removal_weights(const DowndateState& state, const Matrix& x) {
  Vector w(state.size());
  double total = 0.0;
  for (Index p = 0; p < state.size(); ++p) {
    const double q = quadratic_form(
        state.inverse(), x.row(state.active()[p]));
    w[p] = std::clamp(1.0 - q, 0.0, 1.0);
    total += w[p];
  }
  if (total <= kZeroTotalTolerance && state.size() > state.target_size()) {
    throw Error(ErrorCode::AllWeightsZero,
                "all removal weights vanish; use the uniform fallback");
  }
  return w;
}

Index draw_proportional(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double h : weights) total += clamp_weight(h);
  const double u = rng.uniform();
  if (total <= kZeroTotalTolerance) {
    return std::min(static_cast<Index>(u * weights.size()), weights.size() - 1);
  }
  const double target = u * total;
  double acc = 0.0;
  Index last_positive = 0;
  for (Index p = 0; p < weights.size(); ++p) {
    const double w = clamp_weight(weights[p]);
    if (w == 0.0) continue;
    acc += w;
    last_positive = p;
    if (target < acc) return p;
  }
  return last_positive;
}

SubsetSample reg_vol_sample(const Matrix& x, const SamplerConfig& cfg,
                            Rng& rng) {
  validate(x, cfg);
  DowndateState st(x, cfg.lambda, cfg.target_size, /*track_weights=*/true);
  IndexList order;
  order.reserve(x.rows() - cfg.target_size);
  run_reg_vol(st, rng, order);
  return finish(st, cfg, Algorithm::RegVol, std::move(order), 0);
}

SubsetSample fast_reg_vol_sample(const Matrix& x, const SamplerConfig& cfg,
                                 Rng& rng) {
  validate(x, cfg);
  const Index s = cfg.target_size;
  const Index threshold = std::max(s, 2 * x.cols());
  DowndateState st(x, cfg.lambda, s, /*track_weights=*/false,
                   DowndateState::Refresh::Proportional);
  IndexList order;
  order.reserve(x.rows() - s);
  std::uint64_t trials = 0;

  while (st.size() > threshold) {
    Index pos = 0;
    for (;;) {
      pos = rng.uniform_index(st.size());
      const double h = clamp_weight(st.fresh_weight(pos));
      ++trials;
      if (rng.bernoulli(h)) break;
    }
    order.push_back(st.active()[pos]);
    st.remove_at(pos);
  }

  if (st.size() == s) {
    return finish(st, cfg, Algorithm::FastRegVol, std::move(order), trials);
  }
  DowndateState tail(x, st.active(), cfg.lambda, s, /*track_weights=*/true);
  run_reg_vol(tail, rng, order);
  return finish(tail, cfg, Algorithm::FastRegVol, std::move(order), trials);
}

SubsetSample leverage_iid_sample(const Matrix& x, Index s, double lambda,
                                 Rng& rng) {
  SamplerConfig cfg{s, lambda, 0, Algorithm::LeverageIID};
  validate(x, cfg);
  const Vector scores = leverage_scores(x, lambda);
  Vector cumulative(scores.size());
  double total = 0.0;
  for (Index i = 0; i < scores.size(); ++i) {
    total += std::max(scores[i], 0.0);
    cumulative[i] = total;
  }

  SubsetSample out;
  out.size = s;
  out.lambda = lambda;
  out.algorithm = Algorithm::LeverageIID;
  out.multiset = true;
  out.indices.reserve(s);
  for (Index k = 0; k < s; ++k) {
    const double target = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    Index i = static_cast<Index>(it - cumulative.begin());
    out.indices.push_back(std::min(i, scores.size() - 1));
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.importance_weights.reserve(s);
  for (Index i : out.indices) {
    const double p = std::max(scores[i], 0.0) / total;
    out.importance_weights.push_back(1.0 / std::sqrt(static_cast<double>(s) * p));
  }
  return out;
}

SubsetSample sample(const Matrix& x, const SamplerConfig& cfg) {
  Rng rng(cfg.seed);
  SubsetSample out;
  switch (cfg.algorithm) {
    case Algorithm::RegVol: out = reg_vol_sample(x, cfg, rng); break;
    case Algorithm::FastRegVol: out = fast_reg_vol_sample(x, cfg, rng); break;
    case Algorithm::LeverageIID:
      out = leverage_iid_sample(x, cfg.target_size, cfg.lambda, rng);
      break;
    case Algorithm::Oracle:
      throw Error(ErrorCode::UnsupportedCombination,
                  "oracle sampling lives in the oracle module (draw_subset)");
  }
  out.seed = cfg.seed;
  return out;
}

double marginal_probability(const Matrix& x, Index s, Index i) {
  if (i >= x.rows()) {
    throw Error(ErrorCode::InvalidConfig, "row index out of range");
  }
  return marginal_probabilities(x, s)[i];
}

Vector marginal_probabilities(const Matrix& x, Index s) {
  const Index n = x.rows(), d = x.cols();
  validate(x, SamplerConfig{s, 0.0, 0, Algorithm::RegVol});
  if (s == n) {
    // Forces the full-rank check even though the answer is trivial.
    (void)chol_logdet(gram(x));
    return Vector(n, 1.0);
  }
  const Vector l = leverage_scores(x, 0.0);
  const double a = static_cast<double>(s - d) / static_cast<double>(n - d);
  const double b = static_cast<double>(n - s) / static_cast<double>(n - d);
  Vector p(n);
  for (Index k = 0; k < n; ++k) p[k] = a + b * l[k];
  return p;
}

}  // namespace volsample
