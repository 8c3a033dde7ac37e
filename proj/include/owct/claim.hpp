#pragma once

#include <string>
#include <utility>

namespace owct {

enum class Hypothesis { none, met, not_met };

std::string to_string(Hypothesis h);

/// Outcome of checking one structural claim on one instance.
struct ClaimResult {
  std::string claim_id;
  std::string anchor;
  Hypothesis hypothesis = Hypothesis::none;
  bool passed = true;
  double residual = 0.0;
  /// Witness, counterexample or explanatory note.
  std::string detail;

  /// "pass", "fail" or "hypothesis_not_met".
  std::string status() const;
  /// Only failures whose hypothesis held count against an instance.
  bool counts_as_failure() const { return hypothesis != Hypothesis::not_met && !passed; }
};

inline ClaimResult make_claim(std::string id, std::string anchor) {
  ClaimResult c;
  c.claim_id = std::move(id);
  c.anchor = std::move(anchor);
  return c;
}

}  // namespace owct
