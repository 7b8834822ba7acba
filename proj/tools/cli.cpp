#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "volsample/dataset.hpp"
#include "volsample/error.hpp"
#include "volsample/experiments.hpp"
#include "volsample/fixtures.hpp"
#include "volsample/linalg.hpp"
#include "volsample/oracle.hpp"
#include "volsample/regression.hpp"
#include "volsample/sampling.hpp"
#include "volsample/timing.hpp"

namespace volsample::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct InputOptions {
  std::string path;
  std::string format;
  std::string fixture;
  std::optional<Index> features;
  std::string position = "general";
};

struct CommonOptions {
  InputOptions input;
  std::uint64_t seed = 0;
  std::string json_path;
  bool timings = false;
};

class Timer {
 public:
  void mark(const std::string& phase) {
    const auto now = Clock::now();
    phases_[phase] =
        std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }
  Json to_json() const {
    Json j = Json::object();
    for (const auto& [k, v] : phases_) j[k] = v;
    return j;
  }

 private:
  Clock::time_point last_ = Clock::now();
  std::map<std::string, double> phases_;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("VOLSAMPLE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidConfig,
              std::string("VOLSAMPLE_SEED is not an unsigned integer: ") + env);
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) {
      throw Error(ErrorCode::InvalidConfig,
                  std::string("bad ") + what + " entry '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw Error(ErrorCode::InvalidConfig, std::string("empty ") + what);
  }
  return out;
}

std::vector<Algorithm> parse_algorithms(const std::string& text) {
  std::vector<Algorithm> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_algorithm(item));
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, "no algorithm given");
  return out;
}

Fixture builtin_fixture(const std::string& spec, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  const auto arg = [&](std::size_t k) -> double {
    if (parts.size() <= k) {
      throw Error(ErrorCode::InvalidConfig, "fixture '" + spec + "' needs more parameters");
    }
    return parse_list<double>(parts[k], "fixture parameter").front();
  };
  const std::string& name = parts.empty() ? spec : parts[0];
  if (name == "degenerate") return fixtures::degenerate();
  if (name == "perturbed") return fixtures::perturbed(parts.size() > 1 ? arg(1) : 0.1);
  if (name == "simplex") return fixtures::centered_simplex(static_cast<Index>(arg(1)));
  if (name == "gaussian") {
    return fixtures::gaussian(static_cast<Index>(arg(1)),
                              static_cast<Index>(arg(2)), seed);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown fixture '" + spec + "'");
}

DatasetFormat infer_format(const InputOptions& in) {
  if (!in.format.empty()) return parse_format(in.format);
  const auto dot = in.path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : in.path.substr(dot + 1);
  return ext == "svm" || ext == "libsvm" ? DatasetFormat::LibSVM
                                         : DatasetFormat::CSV;
}

struct LoadedInput {
  RegressionProblem problem;
  Position position = Position::General;
  Json description;
};

LoadedInput load_input(const CommonOptions& opt) {
  const auto& in = opt.input;
  if (in.path.empty() == in.fixture.empty()) {
    throw Error(ErrorCode::InvalidConfig,
                "exactly one of --input and --fixture is required");
  }
  LoadedInput out;
  if (!in.fixture.empty()) {
    Fixture f = builtin_fixture(in.fixture, opt.seed);
    out.problem = std::move(f.problem);
    out.position = f.position;
    out.description = {{"fixture", f.name}};
  } else {
    const auto format = infer_format(in);
    Dataset ds = parse_dataset(in.path, format, in.features);
    out.problem = std::move(ds.problem);
    out.description = {{"path", ds.source}, {"format", to_string(format)}};
    if (in.position == "degenerate") {
      out.position = Position::Degenerate;
    } else if (in.position != "general") {
      throw Error(ErrorCode::InvalidConfig, "--position must be general or degenerate");
    }
  }
  validate(out.problem);
  out.description["n"] = out.problem.rows();
  out.description["d"] = out.problem.dim();
  return out;
}

Json to_json(const MeanSe& m) {
  return {{"mean", m.mean}, {"se", m.se}, {"count", m.count}};
}

Json to_json(const IndexList& v) {
  Json j = Json::array();
  for (Index i : v) j.push_back(i);
  return j;
}

Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(std::move(row));
  }
  return j;
}

Json to_json(const IdentityReport& r, bool with_values) {
  Json j = {{"identity", to_string(r.id)}, {"n", r.n},     {"d", r.d},
            {"s", r.s},                    {"lambda", r.lambda},
            {"mode", r.equality ? "equality" : "inequality"},
            {"max_abs_dev", r.max_abs_dev},
            {"max_rel_dev", r.max_rel_dev}};
  j["psd_margin"] = r.psd_margin ? Json(*r.psd_margin) : Json(nullptr);
  j["passed"] = r.passed;
  if (with_values) {
    j["lhs"] = to_json(r.lhs);
    j["rhs"] = to_json(r.rhs);
  }
  return j;
}

void write_json(const std::string& path, const Json& j) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

Json header(const std::string& command, const std::vector<std::string>& args,
            const CommonOptions& opt) {
  Json argv = Json::array();
  for (std::size_t k = 1; k < args.size(); ++k) argv.push_back(args[k]);
  return {{"command", command}, {"args", argv}, {"seed", opt.seed}};
}

void add_common(CLI::App* app, CommonOptions& opt, bool needs_input) {
  if (needs_input) {
    app->add_option("--input", opt.input.path, "Dataset path");
    app->add_option("--format", opt.input.format, "csv or libsvm")
        ->check(CLI::IsMember({"csv", "libsvm"}));
    app->add_option("--fixture", opt.input.fixture,
                    "Built-in fixture: degenerate, perturbed[:eps], simplex:d, "
                    "gaussian:n:d");
    app->add_option("--features", opt.input.features,
                    "Feature count for libsvm input");
  }
  app->add_option("--seed", opt.seed, "RNG seed (default $VOLSAMPLE_SEED or 0)");
  app->add_option("--json", opt.json_path, "Write the JSON report here");
  app->add_flag("--timings", opt.timings, "Include wall-clock timings");
}

// ---------------------------------------------------------------------------

struct SampleOptions {
  Index size = 0;
  double lambda = 0.0;
  std::string algorithm = "regvol";
};

int cmd_sample(const std::vector<std::string>& args, const CommonOptions& opt,
               const SampleOptions& so, std::ostream& out) {
  Timer timer;
  const LoadedInput in = load_input(opt);
  timer.mark("parse");
  const SamplerConfig cfg{so.size, so.lambda, opt.seed,
                          parse_algorithm(so.algorithm)};
  Rng rng(cfg.seed);
  const SubsetSample s = draw_subset(in.problem.x, cfg, rng);
  timer.mark("sample");

  for (std::size_t k = 0; k < s.indices.size(); ++k)
    out << (k ? " " : "") << s.indices[k];
  out << '\n';

  Json j = header("sample", args, opt);
  j["input"] = in.description;
  j["config"] = {{"size", so.size},
                 {"lambda", so.lambda},
                 {"algorithm", to_string(cfg.algorithm)}};
  Json result = {{"indices", to_json(s.indices)},
                 {"rejection_trials", s.rejection_trials},
                 {"multiset", s.multiset}};
  if (s.removal_order) result["removal_order"] = to_json(*s.removal_order);
  if (!s.importance_weights.empty()) result["importance_weights"] = s.importance_weights;
  j["result"] = std::move(result);
  if (opt.timings) j["timings_ms"] = timer.to_json();
  write_json(opt.json_path, j);
  return 0;
}

// ---------------------------------------------------------------------------

struct RegressOptions {
  Index size = 0;
  double lambda = 0.0;
  std::string lambda_grid;
  double leverage_lambda = 0.0;
  std::string algorithms = "regvol";
  Index replicates = 100;
  bool average = false;
  std::string true_weights;
};

int cmd_regress(const std::vector<std::string>& args, const CommonOptions& opt,
                const RegressOptions& ro, std::ostream& out) {
  Timer timer;
  const LoadedInput in = load_input(opt);
  timer.mark("parse");
  const auto algorithms = parse_algorithms(ro.algorithms);
  const std::vector<double> lambdas =
      ro.lambda_grid.empty() ? std::vector<double>{ro.lambda}
                             : parse_list<double>(ro.lambda_grid, "lambda grid");
  std::optional<NoiseModel> truth;
  if (!ro.true_weights.empty()) {
    truth = NoiseModel{parse_list<double>(ro.true_weights, "true weights"), 0.0};
  }

  Json j = header("regress", args, opt);
  j["input"] = in.description;
  j["config"] = {{"size", ro.size},
                 {"replicates", ro.replicates},
                 {"average", ro.average},
                 {"leverage_lambda", ro.leverage_lambda}};
  const Estimator full = solve_full(in.problem);
  j["full_loss"] = total_loss(in.problem, full);

  Json runs = Json::array();
  out << std::left << std::setw(12) << "algorithm" << std::setw(12) << "lambda"
      << std::setw(16) << "mean_loss" << std::setw(14) << "se"
      << "failed\n";
  for (double lambda : lambdas) {
    for (Algorithm a : algorithms) {
      ReplicateSpec spec;
      spec.algorithm = a;
      spec.size = ro.size;
      spec.sample_lambda = a == Algorithm::LeverageIID ? ro.leverage_lambda : lambda;
      spec.ridge_lambda = lambda;
      spec.seed = opt.seed;
      spec.truth = truth;
      if (ro.average) {
        spec.replicates = 1;
        spec.average_over = ro.replicates;
      } else {
        spec.replicates = ro.replicates;
      }
      const ReplicateOutcome r = run_replicates(in.problem, spec);
      timer.mark(std::string(to_string(a)) + "@" + std::to_string(lambda));

      Json run = {{"algorithm", to_string(a)},
                  {"lambda", lambda},
                  {"sample_lambda", spec.sample_lambda},
                  {"total_loss", to_json(r.total_loss)},
                  {"mean_loss", to_json(r.mean_loss)},
                  {"rejection_trials", to_json(r.rejection_trials)},
                  {"failed_replicates", r.failed}};
      if (r.mspe) run["mspe"] = to_json(*r.mspe);
      if (r.mse) run["mse"] = to_json(*r.mse);
      if (a == Algorithm::Oracle) {
        run["exact_expected_loss"] =
            exact_expected_loss(in.problem, ro.size, lambda, lambda);
      }
      runs.push_back(std::move(run));
      out << std::setw(12) << to_string(a) << std::setw(12) << lambda
          << std::setw(16) << r.mean_loss.mean << std::setw(14)
          << r.mean_loss.se << r.failed << '\n';
    }
  }
  j["runs"] = std::move(runs);
  if (opt.timings) j["timings_ms"] = timer.to_json();
  write_json(opt.json_path, j);
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::string suite = "identities";
  Index draws = 100000;
  Index replicates = 2000;
  bool values = false;
};

Json verify_identities(const CommonOptions& opt, const VerifyOptions& vo,
                       std::ostream& out, bool& all_passed) {
  struct Case {
    std::string name;
    RegressionProblem problem;
    Position position;
  };
  std::vector<Case> cases;
  if (!opt.input.path.empty() || !opt.input.fixture.empty()) {
    LoadedInput in = load_input(opt);
    cases.push_back({in.description.dump(), std::move(in.problem), in.position});
  } else {
    for (Index n : {6, 8})
      for (Index d : {1, 2, 3}) {
        Fixture f = fixtures::gaussian(n, d, Rng::replicate_seed(opt.seed, n * 10 + d));
        cases.push_back({f.name, std::move(f.problem), f.position});
      }
    Fixture deg = fixtures::degenerate();
    cases.push_back({deg.name, std::move(deg.problem), deg.position});
  }

  Json reports = Json::array();
  for (const auto& c : cases) {
    const Index n = c.problem.rows(), d = c.problem.dim();
    for (IdentityId id : all_identities()) {
      if (id == IdentityId::RegInverseBound || id == IdentityId::Normalization)
        continue;  // lambda = 0 suite
      for (Index s = d; s <= n; ++s) {
        if ((id == IdentityId::ProjSquare || id == IdentityId::LossFactor) && s != d)
          continue;
        const IdentityReport r =
            verify_identity(id, c.problem.x, c.problem.y, s, 0.0, c.position);
        all_passed = all_passed && r.passed;
        Json jr = to_json(r, vo.values);
        jr["case"] = c.name;
        reports.push_back(std::move(jr));
        out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(20)
            << to_string(id) << c.name << " s=" << s
            << " rel_dev=" << r.max_rel_dev << '\n';
      }
    }
    for (double lambda : {0.1, 1.0}) {
      const double dl = d_lambda(c.problem.x, lambda);
      for (Index s = std::max<Index>(1, static_cast<Index>(std::ceil(dl - 1e-12)));
           s <= n; ++s) {
        for (IdentityId id : {IdentityId::RegInverseBound, IdentityId::Normalization}) {
          const IdentityReport r =
              verify_identity(id, c.problem.x, c.problem.y, s, lambda, c.position);
          all_passed = all_passed && r.passed;
          Json jr = to_json(r, vo.values);
          jr["case"] = c.name;
          reports.push_back(std::move(jr));
          out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(20)
              << to_string(id) << c.name << " s=" << s << " lambda=" << lambda
              << '\n';
        }
      }
    }
  }
  return reports;
}

Json verify_distribution(const CommonOptions& opt, const VerifyOptions& vo,
                         std::ostream& out, bool& all_passed) {
  Json reports = Json::array();
  for (Index d : {1, 2, 3}) {
    const Matrix x = fixtures::gaussian_matrix(8, d, Rng::replicate_seed(opt.seed, d));
    for (Index s : {d, d + 2}) {
      for (Algorithm a : {Algorithm::RegVol, Algorithm::FastRegVol}) {
        const SamplerConfig cfg{s, 0.0, opt.seed, a};
        const EmpiricalReport r = empirical_distribution_test(x, cfg, vo.draws);
        const bool ok =
            r.tv_distance < 0.02 && r.max_marginal_z <= 4.0 && r.impossible_draws == 0;
        all_passed = all_passed && ok;
        reports.push_back({{"algorithm", to_string(a)},
                           {"n", 8},
                           {"d", d},
                           {"s", s},
                           {"draws", r.draws},
                           {"tv_distance", r.tv_distance},
                           {"chi_square", r.chi_square},
                           {"cells", r.cells},
                           {"max_marginal_z", r.max_marginal_z},
                           {"mean_rejection_trials", r.mean_rejection_trials},
                           {"passed", ok}});
        out << (ok ? "PASS " : "FAIL ") << std::left << std::setw(12)
            << to_string(a) << "d=" << d << " s=" << s
            << " tv=" << r.tv_distance << " max_z=" << r.max_marginal_z << '\n';
      }
    }
  }
  return reports;
}

Json verify_regression_bounds(const CommonOptions& opt, const VerifyOptions& vo,
                              std::ostream& out, bool& all_passed) {
  const Index n = 60, d = 5;
  const double sigma = 1.0;
  const Matrix x = fixtures::gaussian_matrix(n, d, opt.seed);
  Rng wrng = Rng::for_replicate(opt.seed, 0x5eed);
  Vector w(d);
  for (double& v : w) v = wrng.normal();
  const double lambda = sigma * sigma / squared_norm(w);
  const double dl = d_lambda(x, lambda);
  const double tr = trace(inverse_spd(gram(x, lambda)).matrix());

  Json reports = Json::array();
  const RegressionProblem base{x, Vector(n, 0.0)};
  IndexList sizes{static_cast<Index>(std::ceil(dl)), d, 2 * d};
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (Index s : sizes) {
    ReplicateSpec spec;
    spec.algorithm = Algorithm::RegVol;
    spec.size = s;
    spec.sample_lambda = lambda;
    spec.ridge_lambda = lambda;
    spec.replicates = vo.replicates;
    spec.seed = Rng::replicate_seed(opt.seed, s);
    spec.truth = NoiseModel{w, sigma};
    spec.redraw_noise = true;
    const ReplicateOutcome r = run_replicates(base, spec);
    const double mspe_bound = sigma * sigma * dl / (s - dl + 1);
    const double mse_bound = sigma * sigma * n * tr / (s - dl + 1);
    const bool ok = r.mspe->mean <= mspe_bound + 3 * r.mspe->se &&
                    r.mse->mean <= mse_bound + 3 * r.mse->se;
    all_passed = all_passed && ok;
    reports.push_back({{"s", s},
                       {"lambda", lambda},
                       {"d_lambda", dl},
                       {"mspe", to_json(*r.mspe)},
                       {"mspe_bound", mspe_bound},
                       {"mse", to_json(*r.mse)},
                       {"mse_bound", mse_bound},
                       {"passed", ok}});
    out << (ok ? "PASS " : "FAIL ") << "s=" << s << " mspe=" << r.mspe->mean
        << " <= " << mspe_bound << " mse=" << r.mse->mean << " <= " << mse_bound
        << '\n';
  }
  return reports;
}

int cmd_verify(const std::vector<std::string>& args, const CommonOptions& opt,
               const VerifyOptions& vo, std::ostream& out) {
  Timer timer;
  bool passed = true;
  Json j = header("verify", args, opt);
  j["suite"] = vo.suite;
  if (vo.suite == "identities") {
    j["reports"] = verify_identities(opt, vo, out, passed);
  } else if (vo.suite == "distribution") {
    j["reports"] = verify_distribution(opt, vo, out, passed);
  } else {
    j["reports"] = verify_regression_bounds(opt, vo, out, passed);
  }
  timer.mark("verify");
  j["passed"] = passed;
  if (opt.timings) j["timings_ms"] = timer.to_json();
  write_json(opt.json_path, j);
  return passed ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct BenchOptions {
  std::string algorithms = "regvol,fastregvol";
  std::string sizes = "1000,2000,4000,8000,16000,32000";
  Index d = 10;
  std::optional<Index> s;
  double lambda = 0.0;
  int repetitions = 5;
  int warmups = 1;
};

int cmd_bench(const std::vector<std::string>& args, const CommonOptions& opt,
              const BenchOptions& bo, std::ostream& out) {
  BenchSpec spec;
  spec.algorithms = parse_algorithms(bo.algorithms);
  spec.sizes = parse_list<Index>(bo.sizes, "size list");
  spec.d = bo.d;
  spec.s = bo.s.value_or(bo.d);
  spec.lambda = bo.lambda;
  spec.seed = opt.seed;
  spec.policy = {bo.warmups, bo.repetitions};
  const BenchResult r = run_bench(spec);

  Json j = header("bench", args, opt);
  j["config"] = {{"d", spec.d}, {"s", spec.s}, {"lambda", spec.lambda},
                 {"warmups", bo.warmups}, {"repetitions", bo.repetitions}};
  Json points = Json::array();
  out << std::left << std::setw(12) << "algorithm" << std::setw(10) << "n"
      << "median_ms\n";
  for (const auto& p : r.points) {
    points.push_back({{"algorithm", to_string(p.algorithm)},
                      {"n", p.n},
                      {"median_ms", p.millis},
                      {"rejection_trials", p.rejection_trials}});
    out << std::setw(12) << to_string(p.algorithm) << std::setw(10) << p.n
        << p.millis << '\n';
  }
  j["points"] = std::move(points);
  Json slopes = Json::object();
  for (std::size_t k = 0; k < spec.algorithms.size(); ++k) {
    slopes[std::string(to_string(spec.algorithms[k]))] = r.slopes[k];
    out << "slope " << to_string(spec.algorithms[k]) << ' ' << r.slopes[k] << '\n';
  }
  j["log_log_slope"] = std::move(slopes);
  write_json(opt.json_path, j);
  return 0;
}

void report_error(std::ostream& err, const std::string& path,
                  std::string_view code, const std::string& message) {
  const Json j = {{"error", {{"code", code}, {"message", message}}}};
  err << j.dump() << '\n';
  if (!path.empty()) {
    std::ofstream f(path);
    if (f) f << j.dump(2) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Volume sampling for linear regression", "volsample"};
  app.require_subcommand(1);

  CommonOptions common;
  SampleOptions so;
  RegressOptions ro;
  VerifyOptions vo;
  BenchOptions bo;

  auto* sample = app.add_subcommand("sample", "Draw one subset");
  add_common(sample, common, true);
  sample->add_option("--size", so.size, "Subset size s")->required();
  sample->add_option("--lambda", so.lambda, "Regularization lambda");
  sample->add_option("--algorithm", so.algorithm, "regvol, fastregvol, leverage or oracle");

  auto* regress = app.add_subcommand("regress", "Subsampled regression experiment");
  add_common(regress, common, true);
  regress->add_option("--size", ro.size, "Subset size s")->required();
  regress->add_option("--lambda", ro.lambda, "Ridge and sampling lambda");
  regress->add_option("--lambda-grid", ro.lambda_grid, "Comma-separated lambdas");
  regress->add_option("--leverage-lambda", ro.leverage_lambda,
                      "Lambda for the leverage scores");
  regress->add_option("--algorithm", ro.algorithms, "Comma-separated algorithms");
  regress->add_option("--replicates", ro.replicates, "Replicates per algorithm");
  regress->add_flag("--average", ro.average,
                    "Report the loss of the averaged estimator");
  regress->add_option("--true-weights", ro.true_weights,
                      "Comma-separated w for MSPE and MSE");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  add_common(verify, common, true);
  verify->add_option("--suite", vo.suite)
      ->check(CLI::IsMember({"identities", "distribution", "regression-bounds"}));
  verify->add_option("--position", common.input.position,
                     "general or degenerate (identities on --input)");
  verify->add_option("--draws", vo.draws, "Draws per distribution test");
  verify->add_option("--replicates", vo.replicates, "Replicates per bound check");
  verify->add_flag("--values", vo.values, "Include lhs and rhs matrices");

  auto* bench = app.add_subcommand("bench", "Time samplers over a size grid");
  add_common(bench, common, false);
  bench->add_option("--algorithm", bo.algorithms, "Comma-separated algorithms");
  bench->add_option("--sizes", bo.sizes, "Comma-separated n values");
  bench->add_option("--d", bo.d, "Feature count");
  bench->add_option("--s", bo.s, "Subset size (default d)");
  bench->add_option("--lambda", bo.lambda, "Regularization lambda");
  bench->add_option("--repetitions", bo.repetitions, "Timed repetitions");
  bench->add_option("--warmups", bo.warmups, "Untimed warm-up runs");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    common.seed = default_seed();
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, common.json_path, to_string(ErrorCode::InvalidConfig), e.what());
    return 2;
  } catch (const Error& e) {
    report_error(err, common.json_path, to_string(e.code()), e.what());
    return 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(args, common, so, out);
    if (regress->parsed()) return cmd_regress(args, common, ro, out);
    if (verify->parsed()) return cmd_verify(args, common, vo, out);
    return cmd_bench(args, common, bo, out);
  } catch (const Error& e) {
    report_error(err, common.json_path, to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    report_error(err, common.json_path, "Internal", e.what());
  }
  return 2;
}

}  // namespace volsample::cli
