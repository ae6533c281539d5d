#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oplip/cli.hpp"
#include "oplip/serialize.hpp"

using namespace oplip;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "oplip");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("oplip_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  std::string out(const std::string& sub = "") const { return (root_ / sub).string(); }

  fs::path root_;
};

ExperimentRecord make_record(const std::string& kind, double alpha, Index dim, double ratio) {
  ExperimentRecord r;
  r.kind = kind;
  r.alpha = SchattenIndex(alpha);
  r.dim = dim;
  r.trials = 1;
  r.seed = 3;
  r.best_ratio = ratio;
  return r;
}

}  // namespace

TEST_F(CliTest, VerifyPasses) {
  const Result r = run_args({"verify", "--dims", "2,4,8", "--seed", "1", "--out", out()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto report = nlohmann::json::parse(slurp(root_ / "verify" / "verify_report.json"));
  EXPECT_EQ(report.at("failures"), 0);
  EXPECT_GT(report.at("assertions").get<int>(), 100);
  EXPECT_TRUE(fs::exists(root_ / "verify" / "config.ini"));
}

TEST_F(CliTest, VerifyFailsOnImpossibleTolerance) {
  const Result r = run_args({"verify", "--dims", "4", "--tol", "duhamel=1e-30", "--out", out()});
  EXPECT_EQ(r.code, kExitVerifyFailed);
  EXPECT_NE(r.err.find("Duhamel"), std::string::npos);
}

TEST_F(CliTest, DecomposeReportsReconstructionError) {
  const Result r = run_args({"decompose", "--smax", "200", "--ds", "0.01", "--out", out()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(slurp(root_ / "decompose" / "reconstruction.csv"));
  std::string line;
  std::getline(csv, line);  // timestamp
  ASSERT_EQ(line.rfind("# generated", 0), 0u);
  std::getline(csv, line);
  EXPECT_EQ(line, "ratio,mu,relative_error");
  double worst = 0.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    worst = std::max(worst, std::stod(line.substr(line.rfind(',') + 1)));
    ++rows;
  }
  EXPECT_EQ(rows, 2500);
  EXPECT_LE(worst, 1e-5);
  EXPECT_TRUE(fs::exists(root_ / "decompose" / "g.csv"));
}

TEST_F(CliTest, EstimateAbsOnS2) {
  const Result r = run_args(
      {"estimate", "--f", "abs", "--alpha", "2", "--dims", "16", "--trials", "100", "--seed", "5", "--out", out()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rec = record_from_json(nlohmann::json::parse(slurp(root_ / "estimate" / "records" / "lipschitz_a2_d16.json")));
  EXPECT_LE(rec.best_ratio, 1.0 + 1e-9);
  EXPECT_EQ(rec.trials, 100);
  EXPECT_EQ(rec.seed, 5u);
}

TEST_F(CliTest, EstimateMultiplierWritesNormTable) {
  const Result r = run_args({"estimate", "--kind", "multiplier", "--profile", "strict", "--alpha", "4/3,4", "--dims",
                             "6,10", "--trials", "4", "--steps", "5", "--out", out(), "--no-timestamp"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string table = slurp(root_ / "estimate" / "norm_table.csv");
  EXPECT_EQ(table.rfind("dim,alpha,estimate,seed\n", 0), 0u);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
}

TEST_F(CliTest, CsvByteIdenticalWithoutTimestamp) {
  const std::vector<std::string> common{"growth", "--alpha", "1,2", "--dims", "4,8", "--trials", "4",
                                        "--steps", "10", "--seed", "3", "--no-timestamp"};
  auto a = common, b = common;
  a.insert(a.end(), {"--out", out("a"), "--threads", "1"});
  b.insert(b.end(), {"--out", out("b"), "--threads", "2"});
  ASSERT_EQ(run_args(a).code, kExitOk);
  ASSERT_EQ(run_args(b).code, kExitOk);
  for (const char* name : {"records.csv", "norm_table.csv"}) {
    const std::string x = slurp(root_ / "a" / "growth" / name);
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, slurp(root_ / "b" / "growth" / name)) << name;
    EXPECT_NE(x[0], '#');
  }
  EXPECT_EQ(slurp(root_ / "a" / "growth" / "records" / "truncation_growth_a1_d8.json"),
            slurp(root_ / "b" / "growth" / "records" / "truncation_growth_a1_d8.json"));
}

TEST_F(CliTest, TimestampLineByDefault) {
  ASSERT_EQ(run_args({"growth", "--alpha", "2", "--dims", "3", "--trials", "2", "--steps", "2", "--out", out()}).code,
            kExitOk);
  EXPECT_EQ(slurp(root_ / "growth" / "records.csv").rfind("# generated ", 0), 0u);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  fs::create_directories(root_);
  const fs::path cfg = root_ / "run.ini";
  std::ofstream(cfg) << "alpha=1\ndims=3,5\ntrials=2\nsteps=3\nseed=9\n";
  const Result r = run_args({"growth", "--config", cfg.string(), "--trials", "3", "--out", out()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string echo = slurp(root_ / "growth" / "config.ini");
  EXPECT_NE(echo.find("dims=3,5\n"), std::string::npos);
  EXPECT_NE(echo.find("trials=3\n"), std::string::npos);
  EXPECT_NE(echo.find("seed=9\n"), std::string::npos);
  // the echo is itself a valid config
  const Result again = run_args({"growth", "--config", (root_ / "growth" / "config.ini").string(), "--out", out("x")});
  EXPECT_EQ(again.code, kExitOk) << again.err;
  EXPECT_EQ(slurp(root_ / "x" / "growth" / "config.ini"), echo);
}

TEST_F(CliTest, DistinctExitCodes) {
  EXPECT_EQ(run_args({"frobnicate"}).code, kExitUnknownCommand);
  EXPECT_EQ(run_args({"growth", "--alpha", "0.5", "--out", out()}).code, kExitInvalidAlpha);
  EXPECT_EQ(run_args({"growth", "--alpha", "x/y", "--out", out()}).code, kExitInvalidAlpha);
  EXPECT_EQ(run_args({"growth", "--dims", "4", "--trials", "1", "--steps", "1", "--out", "/proc/oplip_cannot"}).code,
            kExitUnwritableOutput);
  EXPECT_EQ(run_args({}).code, kExitUsage);
  EXPECT_EQ(run_args({"growth", "--trials", "0", "--out", out()}).code, kExitUsage);
  EXPECT_EQ(run_args({"growth", "--bogus-flag", "--out", out()}).code, kExitUsage);
  EXPECT_EQ(run_args({"verify", "--tol", "nonsense=1", "--out", out()}).code, kExitUsage);
  EXPECT_EQ(run_args({"report", "--out", out()}).code, kExitUsage);
  EXPECT_EQ(run_args({"--help"}).code, kExitOk);
}

TEST_F(CliTest, ReportCommandAndMixedKinds) {
  ASSERT_EQ(run_args({"growth", "--alpha", "1", "--dims", "8,128", "--trials", "2", "--steps", "2", "--out",
                      out("g"), "--no-timestamp"})
                .code,
            kExitOk);
  const Result rep = run_args({"report", (root_ / "g" / "growth" / "records").string(), "--out", out("r")});
  ASSERT_EQ(rep.code, kExitOk) << rep.err;
  EXPECT_NE(rep.out.find("growth dim 128 / dim 8 = "), std::string::npos) << rep.out;

  ASSERT_EQ(run_args({"estimate", "--alpha", "2", "--dims", "3", "--trials", "2", "--steps", "2", "--out", out("e")})
                .code,
            kExitOk);
  const Result mixed = run_args({"report", (root_ / "g").string(), (root_ / "e").string(), "--out", out("m")});
  EXPECT_EQ(mixed.code, kExitRuntimeError);
  EXPECT_NE(mixed.err.find("mixed kinds"), std::string::npos);
}

TEST_F(CliTest, BinaryExitStatus) {
  const std::string bin = OPLIP_BINARY;
  EXPECT_EQ(WEXITSTATUS(std::system((bin + " frobnicate 2>/dev/null").c_str())), kExitUnknownCommand);
  EXPECT_EQ(WEXITSTATUS(std::system((bin + " duhamel --dims 3 --r 1 --out " + out() + " >/dev/null").c_str())),
            kExitOk);
  EXPECT_TRUE(fs::exists(root_ / "duhamel" / "duhamel.csv"));
}

TEST(Report, RejectsEmptyAndMixed) {
  EXPECT_THROW(report({}), DomainError);
  EXPECT_THROW(report({make_record("a", 2, 4, 1), make_record("b", 2, 4, 1)}), DomainError);
}

TEST(Report, SingleRecordOneRow) {
  const ReportOutput out = report({make_record("growth", 2, 4, 0.5)});
  EXPECT_EQ(out.csv, "kind,alpha,dim,best_ratio,seed,runtime_ms\ngrowth,2,4,0.5,3,0\n");
}

TEST(Report, OrderedByAlphaThenDimWithGrowthRatio) {
  const ReportOutput out = report({make_record("g", 2, 128, 1.0), make_record("g", 1, 128, 2.4),
                                   make_record("g", 1, 8, 1.2), make_record("g", 2, 8, 1.0)});
  EXPECT_EQ(out.csv,
            "kind,alpha,dim,best_ratio,seed,runtime_ms\n"
            "g,1,8,1.2,3,0\ng,1,128,2.3999999999999999,3,0\ng,2,8,1,3,0\ng,2,128,1,3,0\n");
  EXPECT_NE(out.summary.find("alpha 1 (contrast):"), std::string::npos);
  const auto at = out.summary.find("growth dim 128 / dim 8 = ");
  ASSERT_NE(at, std::string::npos) << out.summary;
  EXPECT_NEAR(std::stod(out.summary.substr(at + 25)), 2.0, 1e-12);
}
