#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "volsample");
  std::ostringstream out, err;
  const int code = volsample::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("volsample_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, SampleFullSizeReturnsAllIndices) {
  const Result r = run({"sample", "--fixture", "degenerate", "--size", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0 1 2\n");
}

TEST(Cli, SampleFromCsvFile) {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("deg.csv"));
    f << "x1,x2,y\n1,1,1\n1,1,0\n1,0,0\n";
  }
  const Result r = run({"sample", "--input", tmp.file("deg.csv"), "--format", "csv",
                        "--size", "2", "--seed", "5"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out == "0 2\n" || r.out == "1 2\n") << r.out;
}

TEST(Cli, DegenerateZeroVolumePairNeverEmitted) {
  std::set<std::string> seen;
  for (int seed = 0; seed < 100000; ++seed) {
    const Result r = run({"sample", "--fixture", "degenerate", "--algorithm", "regvol",
                          "--size", "2", "--seed", std::to_string(seed)});
    ASSERT_EQ(r.code, 0);
    seen.insert(r.out);
  }
  EXPECT_EQ(seen, (std::set<std::string>{"0 2\n", "1 2\n"}));
}

TEST(Cli, SameSeedSameBytes) {
  TempDir tmp;
  const std::vector<std::string> base{"sample", "--fixture", "gaussian:50:4", "--size", "6",
                                      "--algorithm", "fastregvol", "--seed", "77", "--json"};
  auto a = base, b = base;
  a.push_back(tmp.file("a.json"));
  b.push_back(tmp.file("a.json"));
  const Result ra = run(a);
  const std::string ja = slurp(tmp.file("a.json"));
  const Result rb = run(b);
  const std::string jb = slurp(tmp.file("a.json"));
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(ja, jb);
  const json j = json::parse(ja);
  EXPECT_EQ(j["command"], "sample");
  EXPECT_EQ(j["result"]["indices"].size(), 6u);
  EXPECT_TRUE(j["result"].contains("rejection_trials"));
  EXPECT_FALSE(j.contains("timings_ms"));
}

TEST(Cli, TimingsOnRequest) {
  TempDir tmp;
  run({"sample", "--fixture", "degenerate", "--size", "2", "--timings", "--json",
       tmp.file("t.json")});
  const json j = json::parse(slurp(tmp.file("t.json")));
  EXPECT_TRUE(j["timings_ms"].contains("sample"));
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("VOLSAMPLE_SEED", "31", 1);
  const Result a = run({"sample", "--fixture", "gaussian:40:3", "--size", "5"});
  ::unsetenv("VOLSAMPLE_SEED");
  const Result b = run({"sample", "--fixture", "gaussian:40:3", "--size", "5", "--seed", "31"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ErrorsAreMachineReadable) {
  TempDir tmp;
  const Result r = run({"sample", "--fixture", "degenerate", "--size", "1", "--json",
                        tmp.file("e.json")});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "InvalidConfig");
  EXPECT_EQ(json::parse(slurp(tmp.file("e.json")))["error"]["code"], "InvalidConfig");

  const Result missing = run({"sample", "--input", "/nonexistent.csv", "--size", "2"});
  EXPECT_NE(missing.code, 0);
  EXPECT_EQ(json::parse(missing.err)["error"]["code"], "IoError");

  const Result bad_flag = run({"sample", "--bogus"});
  EXPECT_NE(bad_flag.code, 0);
  EXPECT_EQ(json::parse(bad_flag.err)["error"]["code"], "InvalidConfig");

  TempDir t2;
  { std::ofstream f(tmp.file("empty.csv")); }
  const Result empty = run({"sample", "--input", tmp.file("empty.csv"), "--size", "1"});
  EXPECT_EQ(json::parse(empty.err)["error"]["code"], "ParseError");
}

TEST(Cli, RegressDegenerateExpectedLossIsOne) {
  TempDir tmp;
  const Result r = run({"regress", "--fixture", "degenerate", "--size", "2", "--algorithm",
                        "regvol,oracle", "--replicates", "500", "--json", tmp.file("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(slurp(tmp.file("r.json")));
  EXPECT_NEAR(j["runs"][0]["total_loss"]["mean"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["runs"][1]["exact_expected_loss"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["full_loss"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, RegressNoiselessIsZero) {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("lin.csv"));
    f << "a,b,y\n1,0,2\n0,1,-1\n1,1,1\n2,1,3\n1,3,-1\n";
  }
  const Result r = run({"regress", "--input", tmp.file("lin.csv"), "--size", "3", "--algorithm",
                        "regvol,fastregvol", "--replicates", "20", "--json",
                        tmp.file("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(slurp(tmp.file("r.json")));
  for (const auto& run : j["runs"]) EXPECT_LE(run["total_loss"]["mean"].get<double>(), 1e-20);
}

TEST(Cli, RegressLambdaGridAndAverage) {
  TempDir tmp;
  const Result r = run({"regress", "--fixture", "gaussian:30:3", "--size", "4",
                        "--lambda-grid", "0.1,1", "--algorithm", "regvol,leverage",
                        "--replicates", "10", "--average", "--true-weights", "1,1,1",
                        "--json", tmp.file("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(slurp(tmp.file("r.json")));
  ASSERT_EQ(j["runs"].size(), 4u);
  EXPECT_EQ(j["runs"][0]["total_loss"]["count"], 1);
  EXPECT_TRUE(j["runs"][0].contains("mspe"));
}

TEST(Cli, VerifyIdentitiesPass) {
  TempDir tmp;
  const Result r = run({"verify", "--suite", "identities", "--seed", "7", "--json",
                        tmp.file("v.json")});
  EXPECT_EQ(r.code, 0) << r.out;
  const json j = json::parse(slurp(tmp.file("v.json")));
  EXPECT_TRUE(j["passed"].get<bool>());
  for (const auto& rep : j["reports"]) {
    if (rep["mode"] == "equality") EXPECT_LE(rep["max_rel_dev"].get<double>(), 1e-9) << rep;
  }
}

TEST(Cli, VerifyOnDataset) {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("deg.csv"));
    f << "1,1,1\n1,1,0\n1,0,0\n";
  }
  const Result r = run({"verify", "--suite", "identities", "--input", tmp.file("deg.csv"),
                        "--position", "degenerate"});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, BenchReportsSlopes) {
  TempDir tmp;
  const Result r = run({"bench", "--sizes", "200,400", "--d", "3", "--repetitions", "1",
                        "--warmups", "0", "--json", tmp.file("b.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(slurp(tmp.file("b.json")));
  EXPECT_EQ(j["points"].size(), 4u);
  EXPECT_TRUE(j["log_log_slope"].contains("fastregvol"));
}

TEST(Cli, Help) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sample"), std::string::npos);
}
