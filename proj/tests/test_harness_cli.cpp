#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "infprod/harness.hpp"
#include "infprod/scenario.hpp"

using namespace infprod;

namespace {

StrongCampaign strong(const Scenario& s, std::size_t samples) {
  StrongCampaign c;
  c.epsilon = *s.defaults.epsilon;
  c.n_max = *s.defaults.n_max;
  c.samples = samples;
  c.seed = *s.defaults.seed;
  return c;
}

WeakCampaign weak(const Scenario& s, Index depth, std::size_t samples) {
  WeakCampaign c;
  c.depth = depth;
  c.samples = samples;
  c.seed = *s.defaults.seed;
  return c;
}

void expect_counts(const VerificationReport& r) {
  EXPECT_EQ(r.certified + r.inconclusive + r.failed, r.samples);
  EXPECT_EQ(r.records.size(), r.samples);
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Harness, StrongDiscountedAllCertified) {
  const Scenario s = builtin_scenario("discounted-uniform");
  const VerificationReport r = verify_strong(*s.function, s.measure, strong(s, 200));
  expect_counts(r);
  EXPECT_EQ(r.certified_fraction(), 1.0);
}

TEST(Harness, StrongExampleAboveThreshold) {
  const Scenario s = builtin_scenario("example-3-4");
  const VerificationReport r = verify_strong(*s.function, s.measure, strong(s, 200));
  expect_counts(r);
  EXPECT_GE(r.certified_fraction(), 0.98);
}

TEST(Harness, WeakCylinderAllCertified) {
  const Scenario s = builtin_scenario("cylinder-07-03");
  const VerificationReport r = verify_weak(*s.function, s.measure, weak(s, 2, 200));
  expect_counts(r);
  EXPECT_EQ(r.certified_fraction(), 1.0);
}

TEST(Harness, JsonIdenticalAcrossThreadsAndRuns) {
  const Scenario s = builtin_scenario("example-3-4");
  StrongCampaign c = strong(s, 100);
  const std::string one = report_json(verify_strong(*s.function, s.measure, c));
  c.threads = 4;
  const std::string four = report_json(verify_strong(*s.function, s.measure, c));
  const std::string again = report_json(verify_strong(*s.function, s.measure, c));
  EXPECT_EQ(one, four);
  EXPECT_EQ(four, again);

  WeakCampaign w = weak(s, 30, 100);
  const std::string w1 = report_json(verify_weak(*s.function, s.measure, w));
  w.threads = 3;
  EXPECT_EQ(w1, report_json(verify_weak(*s.function, s.measure, w)));
}

TEST(Harness, StrongFractionMonotone) {
  const Scenario s = builtin_scenario("example-3-4");
  StrongCampaign c = strong(s, 100);
  double prev = -1.0;
  for (Index n : {1, 3, 5, 8, 12, 60}) {
    c.n_max = n;
    const double f = verify_strong(*s.function, s.measure, c).certified_fraction();
    EXPECT_GE(f, prev) << n;
    prev = f;
  }
  c.n_max = 60;
  prev = -1.0;
  for (double eps : {0.005, 0.01, 0.05, 0.2}) {
    c.epsilon = eps;
    const double f = verify_strong(*s.function, s.measure, c).certified_fraction();
    EXPECT_GE(f, prev) << eps;
    prev = f;
  }
}

TEST(Harness, WeakFractionMonotoneInDepth) {
  const Scenario s = builtin_scenario("example-3-4");
  double prev = -1.0;
  for (Index m : {1, 5, 10, 30}) {
    const VerificationReport r = verify_weak(*s.function, s.measure, weak(s, m, 100));
    expect_counts(r);
    EXPECT_GE(r.certified_fraction(), prev) << m;
    prev = r.certified_fraction();
  }
  EXPECT_GE(prev, 0.98);
}

TEST(Harness, ReportFields) {
  const Scenario s = builtin_scenario("discounted-uniform");
  VerificationReport r = verify_strong(*s.function, s.measure, strong(s, 10));
  r.scenario = s.name;
  r.digest = s.digest;
  const std::string json = report_json(r);
  for (const char* key : {"\"schema_version\": 1", "\"theorem\": \"Strong-eps\"", "\"scenario_digest\"",
                          "\"master_seed\": 20240607", "\"certified_fraction\"", "\"records\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
  EXPECT_NE(report_text(r).find("certified_fraction 1"), std::string::npos);
}

TEST(Cli, ExpectSucceeds) {
  const CliResult r = run_cli({"expect", "example-3-4"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("0.28878809"), std::string::npos) << r.out;
}

TEST(Cli, JsonReport) {
  const CliResult r = run_cli({"--report", "json", "strong-approx", "example-3-4"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("\"certified_n\": 6"), std::string::npos) << r.out;
}

TEST(Cli, MalformedScenarioIsUsageError) {
  const auto path = std::filesystem::temp_directory_path() / "infprod_malformed.json";
  std::ofstream(path) << "{\n  \"name\": \"broken\",\n  \"spaces\": [\n";
  const CliResult r = run_cli({"expect", path.string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("line"), std::string::npos) << r.err;
  std::filesystem::remove(path);
}

TEST(Cli, UnknownCommandIsUsageError) {
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"expect", "no-such-scenario"}).code, cli::kExitUsage);
}

TEST(Cli, ThresholdMissExitsThree) {
  const CliResult r = run_cli({"verify-strong", "example-3-4", "--n-max", "3", "--samples", "50"});
  EXPECT_EQ(r.code, cli::kExitThreshold) << r.out << r.err;
  EXPECT_NE(r.out.find("MISSED"), std::string::npos);
}

TEST(Cli, ReportDirWritesBothFormats) {
  const auto dir = std::filesystem::temp_directory_path() / "infprod_reports";
  std::filesystem::remove_all(dir);
  const CliResult r =
      run_cli({"verify-weak", "cylinder-07-03", "--samples", "20", "--depth", "2", "--report-dir", dir.string()});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "verify-weak.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "verify-weak.txt"));
  std::filesystem::remove_all(dir);
}

TEST(Cli, GameCommands) {
  EXPECT_EQ(run_cli({"game", "purify", "purify-demo"}).code, cli::kExitOk);
  const CliResult naming = run_cli({"game", "naming-demo", "naming-game"});
  EXPECT_EQ(naming.code, cli::kExitOk) << naming.err;
  EXPECT_NE(naming.out.find("every one"), std::string::npos);
  EXPECT_EQ(run_cli({"game", "value", "naming-game"}).code, cli::kExitOk);
}
