#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kindmc/cli.h"

namespace kindmc {
namespace {

namespace fs = std::filesystem;

std::string model(const std::string &name)
{
  return std::string(KINDMC_MODELS_DIR) + "/" + name + ".kts";
}

struct Run
{
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args)
{
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir : public ::testing::Test
{
 protected:
  void SetUp() override
  {
    dir = fs::temp_directory_path()
          / ("kindmc_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed())
             + "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

TEST(Cli, ExitCodeMapping)
{
  EXPECT_EQ(exit_code(Outcome::Correct), 0);
  EXPECT_EQ(exit_code(Outcome::BugFound), 1);
  EXPECT_EQ(exit_code(Outcome::BoundExhausted), 2);
}

TEST(Cli, VerifyOutcomes)
{
  EXPECT_EQ(cli({"verify", model("chain5")}).code, kExitBug);
  EXPECT_EQ(cli({"verify", model("safe_sat")}).code, kExitCorrect);
  EXPECT_EQ(cli({"verify", model("halt_sink"), "--engine", "plain"}).code, kExitCorrect);
  EXPECT_EQ(cli({"verify", model("handshake"), "--max-k", "4"}).code, kExitBoundExhausted);
}

TEST(Cli, VerifyJson)
{
  auto r = cli({"verify", model("chain5"), "--output", "json", "--engine", "plain"});
  ASSERT_EQ(r.code, kExitBug) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["outcome"], "bug");
  EXPECT_EQ(j["k"], 6);
  EXPECT_EQ(j["mode"], "plain");
  EXPECT_EQ(j["witness_len"], 6);
}

TEST(Cli, Errors)
{
  auto r = cli({"verify", "/nonexistent/model.kts"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
  EXPECT_EQ(cli({"verify", model("chain5"), "--solver", "minisat"}).code, kExitError);
  EXPECT_EQ(cli({"verify", model("chain5"), "--max-k", "0"}).code, kExitError);
  EXPECT_EQ(cli({"verify", model("chain5"), "--solver", "external:false"}).code, kExitError);
  EXPECT_EQ(cli({"bench", "--suite", "nope"}).code, kExitError);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitError);
  EXPECT_EQ(cli({}).code, kExitError);
}

TEST_F(TempDir, ParseErrorIsReported)
{
  const auto f = dir / "bad.kts";
  std::ofstream(f) << "(system (var x (bv 3))\n (init (= y 0)))";
  auto r = cli({"verify", f.string()});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("2:"), std::string::npos) << r.err;
}

TEST_F(TempDir, OracleCap)
{
  const auto f = dir / "wide.kts";
  std::ofstream(f) << "(system (var x (bv 22)) (init (= x 0)) (trans (= (next x) x))"
                      " (prop p true) (halt false))";
  EXPECT_EQ(cli({"oracle", f.string()}).code, kExitError);
  auto r = cli({"oracle", f.string(), "--cap", "22", "--output", "json"});
  ASSERT_EQ(r.code, kExitCorrect) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["unsafe"], false);
}

TEST(Cli, OracleOnChain)
{
  auto r = cli({"oracle", model("chain5"), "--output", "json"});
  ASSERT_EQ(r.code, kExitCorrect);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["unsafe"], true);
  EXPECT_EQ(j["shortest_len"], 6);
}

TEST(Cli, CompareHumanAndInjectedDiscrepancy)
{
  auto r = cli({"compare", model("chain5")});
  EXPECT_EQ(r.code, kExitBug) << r.err;

  VerifyOptions opts;
  opts.file = model("chain5");
  Runner lying = [](const TransitionSystem &, const EngineConfig &c) {
    VerificationReport rep;
    rep.config = c;
    rep.outcome = c.mode == EngineMode::Plain ? Outcome::BugFound : Outcome::Correct;
    return rep;
  };
  std::ostringstream out, err;
  EXPECT_EQ(cmd_compare(opts, out, err, lying), kExitDiscrepancy);
  EXPECT_FALSE(err.str().empty());
}

TEST_F(TempDir, BenchWritesJsonAndMarkdown)
{
  const auto f = dir / "bench.json";
  auto r = cli({"bench", "--suite", "smoke", "--out", f.string(), "--jobs", "2"});
  ASSERT_EQ(r.code, kExitCorrect) << r.err;
  std::ifstream in(f);
  std::stringstream ss;
  ss << in.rdbuf();
  auto records = records_from_json(ss.str());
  EXPECT_EQ(records.size(), 2 * benchmark_suite("smoke").size());
  EXPECT_TRUE(fs::exists(dir / "bench.md"));
}

TEST(Cli, GenerateRoundTrips)
{
  auto r = cli({"generate", "chain_bug", "5"});
  ASSERT_EQ(r.code, kExitCorrect);
  EXPECT_NE(r.out.find("(system"), std::string::npos);
  EXPECT_EQ(cli({"generate", "accumulator", "4", "--safe"}).code, kExitCorrect);
  EXPECT_EQ(cli({"generate", "fibonacci", "4"}).code, kExitError);
}

}  // namespace
}  // namespace kindmc
