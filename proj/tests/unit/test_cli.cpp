#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + OWCT_CLI_PATH + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scenario(const std::string& name) { return std::string(OWCT_SCENARIO_DIR) + "/" + name; }

}  // namespace

TEST(Cli, NormJson) {
  const CliRun r = run("--format json norm --scenario " + scenario("r1.json") + " --function 3,4");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["norm"].get<double>(), 5.0 / std::sqrt(2.0), 1e-9);
}

TEST(Cli, NormText) {
  const CliRun r = run("norm --scenario " + scenario("r1.json") + " --function f");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("2.2360679"), std::string::npos) << r.out;
}

TEST(Cli, AscentJson) {
  const CliRun r = run("--format json ascent --scenario " + scenario("r1.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["ascent"], 2);
  EXPECT_EQ(j["descent"], 2);
  EXPECT_EQ(j["null_dims"][1], 1);
}

TEST(Cli, CesaroModesAgree) {
  const CliRun r = run("--format json cesaro --scenario " + scenario("r3.json") + " --n 4 --mode both");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NO_THROW(nlohmann::json::parse(r.out));
}

TEST(Cli, GchJson) {
  const CliRun r = run("--format json gch --scenario " + scenario("r3.json") + " --samples 20");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NO_THROW(nlohmann::json::parse(r.out));
}

TEST(Cli, VerifyPassesOnScenario) {
  const CliRun r = run("--seed 4 --format json verify --scenario " + scenario("r3.json") + " --instances 1");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["fingerprint"]["seed"], 4);
}

TEST(Cli, SeedEnvironmentOverridesFlag) {
  const std::string args = "random --profile generic --atoms 5 --blocks 2";
  const CliRun a = run("--seed 11 " + args, "ORLICZ_WCT_SEED=3");
  const CliRun b = run("--seed 3 " + args);
  const CliRun c = run("--seed 11 " + args);
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_NO_THROW(nlohmann::json::parse(a.out));
}

TEST(Cli, RandomOutputLoadsAsScenario) {
  const CliRun r = run("--seed 2 random --profile expanding_h --atoms 6 --blocks 3 --young power_plain --params 3");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["atoms"].size(), 6u);
  EXPECT_EQ(j["young"]["kind"], "power_plain");
}

TEST(Cli, ErrorsExitTwo) {
  EXPECT_EQ(run("norm --scenario /nonexistent.json --function f").code, 2);
  EXPECT_EQ(run("--format yaml norm --scenario " + scenario("r1.json") + " --function f").code, 2);
  EXPECT_EQ(run("random --profile wild --atoms 3 --blocks 1").code, 2);
  EXPECT_EQ(run("norm --scenario " + scenario("r1.json") + " --function nope").code, 2);
  EXPECT_EQ(run("").code, 2);
}
