#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "owct/condexp.hpp"
#include "owct/harness.hpp"
#include "owct/subspace.hpp"

using namespace owct;

namespace {

std::string scenario_path(const std::string& name) { return std::string(OWCT_SCENARIO_DIR) + "/" + name; }

std::string error_of(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

VerifyOptions quick() {
  VerifyOptions o;
  o.condexp_trials = 50;
  o.gch_samples = 30;
  o.boundedness_samples = 30;
  o.power_n_max = 8;
  o.range_samples = 10;
  o.ergodic_samples = 10;
  o.cesaro_n_max = 8;
  return o;
}

const ReportEntry& entry(const VerificationReport& r, const std::string& id, const std::string& scope) {
  for (const auto& e : r.entries)
    if (e.result.claim_id == id && e.scope == scope) return e;
  throw std::runtime_error("missing " + id);
}

std::string registry_group(const std::string& id) {
  for (const auto& c : claim_registry())
    if (c.id == id) return c.group;
  return "";
}

}  // namespace

TEST(Scenario, LoadErrors) {
  const std::string base = R"("blocks": [[0, 1]], "u": [1, 1], "w": [1, 1], "young": {"kind": "power_scaled", "p": 2})";
  EXPECT_NE(error_of(R"({"atoms": [1, 0], )" + base + "}").find("atom weight must be > 0"), std::string::npos);
  EXPECT_NE(error_of(R"({"atoms": [1, 1], "blocks": [[0, 1], [1]], "u": [1, 1], "w": [1, 1]})")
                .find("blocks must be disjoint"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"atoms": [1, 1], "blocks": [[0]], "u": [1, 1], "w": [1, 1]})").find("blocks"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"atoms": [1, 1], "blocks": [[0, 1]], "u": [1], "w": [1, 1]})").find("'u'"), std::string::npos);
  EXPECT_NE(error_of(R"({"atoms": [1, 1], )").find("parse error at byte"), std::string::npos);
  EXPECT_NE(error_of(R"({"blocks": [[0]], "u": [1], "w": [1]})").find("missing field 'atoms'"), std::string::npos);
  EXPECT_NE(error_of(R"({"atoms": [1, 1], "blocks": [[0, 1]], "u": [1, 1], "w": [1, 1], "young": {"kind": "cosh"}})")
                .find("young"),
            std::string::npos);
  EXPECT_THROW(load_scenario(scenario_path("does_not_exist.json")), ScenarioError);
}

TEST(Scenario, RoundTripAndFunctions) {
  const Scenario s = load_scenario(scenario_path("r1.json"));
  EXPECT_EQ(s.name, "R1");
  const Scenario back = parse_scenario(to_json(s));
  EXPECT_EQ(to_json(back), to_json(s));
  EXPECT_TRUE(s.function("f").isApprox((MeasurableFn(2) << 1, 3).finished()));
  EXPECT_TRUE(s.function("w").isApprox((MeasurableFn(2) << 1, -1).finished()));
  EXPECT_TRUE(s.function("2, -0.5").isApprox((MeasurableFn(2) << 2, -0.5).finished()));
  EXPECT_THROW(s.function("nope"), ScenarioError);
  EXPECT_THROW(s.function("1,2,3"), ScenarioError);
}

TEST(Registry, CompleteAndConsistent) {
  const auto& reg = claim_registry();
  std::set<std::string> ids;
  const auto& groups = experiment_groups();
  for (const auto& c : reg) {
    EXPECT_TRUE(ids.insert(c.id).second) << c.id;
    EXPECT_FALSE(c.anchor.empty());
    EXPECT_NE(std::find(groups.begin(), groups.end(), c.group), groups.end()) << c.id;
    EXPECT_EQ(anchor_of(c.id), c.anchor);
  }
  EXPECT_THROW(anchor_of("nope"), std::out_of_range);

  // Library-emitted claims use the registry's anchors.
  const Scenario s = load_scenario(scenario_path("r3.json"));
  for (const auto& c : check_condexp_laws(s.cond_exp(), s.phi(), 5, 1e-10)) EXPECT_EQ(c.anchor, anchor_of(c.claim_id));
  for (const auto& c : verify_structure_theorems(s.op(), s.context(), 1e-8).claims)
    EXPECT_EQ(c.anchor, anchor_of(c.claim_id));

  // Every registered claim is produced by its group.
  for (const auto& g : groups)
    for (const auto& c : run_experiment(s, g, 1, quick())) {
      EXPECT_TRUE(ids.count(c.claim_id)) << c.claim_id;
      EXPECT_EQ(registry_group(c.claim_id), g);
    }
}

TEST(Verification, ScenariosPass) {
  for (const char* name : {"r1.json", "r3.json", "r4.json"}) {
    const Scenario s = load_scenario(scenario_path(name));
    const auto r = run_verification(s, 7, 3, quick());
    for (const auto& e : r.entries)
      EXPECT_FALSE(e.result.counts_as_failure()) << name << " " << e.result.claim_id << ": " << e.result.detail;
    EXPECT_EQ(r.exit_code(), 0);
    EXPECT_EQ(r.fingerprint.seed, 7u);
    EXPECT_EQ(r.fingerprint.instances, 3);
  }
}

TEST(Verification, R4PowerGrowth) {
  const Scenario s = load_scenario(scenario_path("r4.json"));
  const auto r = run_verification(s, 1, 0, quick());
  const auto& e = entry(r, "wct.power_bounded", "scenario");
  EXPECT_NE(e.result.detail.find("growth confirmed"), std::string::npos) << e.result.detail;
  EXPECT_EQ(entry(r, "structure.ergodic", "scenario").result.status(), "hypothesis_not_met");
}

TEST(Verification, JsonDeterministicExceptTimestamp) {
  const Scenario s = load_scenario(scenario_path("r1.json"));
  auto a = report_to_json(run_verification(s, 5, 2, quick()), "t1");
  auto b = report_to_json(run_verification(s, 5, 2, quick()), "t2");
  EXPECT_NE(a, b);
  a.erase("generated_at");
  b.erase("generated_at");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a["tool_version"], kToolVersion);
  EXPECT_TRUE(a["passed"].get<bool>());
  for (const auto& c : a["claims"]) {
    for (const char* k : {"claim_id", "anchor", "hypothesis", "status", "residual", "fingerprint", "detail", "scope"})
      EXPECT_TRUE(c.contains(k)) << k;
  }
}

TEST(Verification, EmptyExperimentListGivesHeaderOnly) {
  Scenario s = load_scenario(scenario_path("r1.json"));
  s.experiments = std::vector<std::string>{};
  const auto r = run_verification(s, 0, 5, quick());
  EXPECT_TRUE(r.entries.empty());
  const std::string text = report_to_text(r);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_EQ(text.rfind("claim", 0), 0u);
  EXPECT_EQ(r.exit_code(), 0);

  s.experiments = std::vector<std::string>{"bogus"};
  EXPECT_THROW(run_verification(s, 0, 0, quick()), std::invalid_argument);
  EXPECT_THROW(run_verification(s, 0, -1, quick()), std::invalid_argument);
}

TEST(Verification, FailingLineCarriesFingerprint) {
  VerificationReport r;
  ClaimResult c = make_claim("wct.iterate_formula", anchor_of("wct.iterate_formula"));
  c.hypothesis = Hypothesis::met;
  c.passed = false;
  c.residual = 0.5;
  c.detail = "mismatch at n=3";
  r.entries.push_back({c, "random", nlohmann::json{{"seed", 99}}});
  const std::string text = report_to_text(r);
  EXPECT_NE(text.find("fail"), std::string::npos);
  EXPECT_NE(text.find("\"seed\":99"), std::string::npos);
  EXPECT_NE(text.find("mismatch at n=3"), std::string::npos);
  EXPECT_TRUE(r.failed());
  EXPECT_EQ(r.exit_code(), 1);
  EXPECT_FALSE(report_to_json(r, "t")["passed"].get<bool>());

  ClaimResult skipped = make_claim("structure.ergodic", anchor_of("structure.ergodic"));
  skipped.hypothesis = Hypothesis::not_met;
  skipped.passed = false;
  VerificationReport r2;
  r2.entries.push_back({skipped, "scenario", nlohmann::json::object()});
  EXPECT_FALSE(r2.failed());
  EXPECT_EQ(report_to_text(r2).find("[{"), std::string::npos);
}

TEST(Emit, WritesFileAndRejectsBadTargets) {
  VerificationReport r;
  const auto path = std::filesystem::temp_directory_path() / "owct_emit_test.json";
  emit_report(r, "json", path.string());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j["passed"].get<bool>());
  std::filesystem::remove(path);
  EXPECT_THROW(emit_report(r, "json", "/nonexistent-dir/x/report.json"), std::runtime_error);
  EXPECT_THROW(emit_report(r, "yaml"), std::runtime_error);
}
