#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "owct/claim.hpp"
#include "owct/scenario.hpp"

namespace owct {

inline constexpr const char* kToolVersion = "0.3.0";

struct ClaimSpec {
  std::string id;
  std::string anchor;
  /// Experiment group that produces the claim.
  std::string group;
};

/// Every claim the suite can emit, in report order.
const std::vector<ClaimSpec>& claim_registry();
/// young, condexp, gch, iterate, range, power, cesaro, structure.
const std::vector<std::string>& experiment_groups();
/// Throws std::out_of_range for an unknown id.
const std::string& anchor_of(const std::string& claim_id);

/// Sample sizes for the checks inside each group.
struct VerifyOptions {
  int condexp_trials = 200;
  int gch_samples = 200;
  int boundedness_samples = 200;
  int power_n_max = 20;
  int norm_samples = 8;
  int range_samples = 50;
  int ergodic_samples = 100;
  int cesaro_n_max = 20;
};

/// Runs one experiment group on one instance. Sets *ill_conditioned when
/// the rank decisions of the structure group sit at the threshold.
std::vector<ClaimResult> run_experiment(const Scenario& s, const std::string& group,
                                        std::uint64_t seed, const VerifyOptions& opts = {},
                                        bool* ill_conditioned = nullptr);

struct Fingerprint {
  std::uint64_t seed = 0;
  std::size_t n_atoms = 0;
  std::size_t n_blocks = 0;
  int instances = 0;
  std::string scenario;
};

struct ReportEntry {
  ClaimResult result;
  /// "scenario" or "random".
  std::string scope;
  /// Instance the entry refers to; for random aggregates the first failure.
  nlohmann::json fingerprint;
};

struct VerificationReport {
  std::string tool_version = kToolVersion;
  Fingerprint fingerprint;
  std::vector<ReportEntry> entries;
  /// Random instances re-drawn because a rank decision was ill-conditioned.
  int redrawn = 0;

  /// True when a claim whose hypothesis held failed.
  bool failed() const;
  int exit_code() const { return failed() ? 1 : 0; }
};

/// Runs the scenario's experiment groups on the scenario itself, then on
/// `instances` random instances of the same size (profiles cycled,
/// ill-conditioned draws replaced), aggregated per claim id.
VerificationReport run_verification(const Scenario& s, std::uint64_t seed, int instances,
                                    const VerifyOptions& opts = {});

nlohmann::json report_to_json(const VerificationReport& r, const std::string& generated_at);
std::string report_to_text(const VerificationReport& r);
/// UTC timestamp, ISO 8601.
std::string timestamp_now();

/// Writes to `path`, or stdout when path is empty. Throws
/// std::runtime_error for an unknown format or an unwritable path.
void emit_report(const VerificationReport& r, const std::string& format,
                 const std::string& path = {});

}  // namespace owct
