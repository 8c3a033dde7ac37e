#include "owct/claim.hpp"

namespace owct {

std::string to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::none: return "none";
    case Hypothesis::met: return "met";
    case Hypothesis::not_met: return "not_met";
  }
  return "none";
}

std::string ClaimResult::status() const {
  if (hypothesis == Hypothesis::not_met) return "hypothesis_not_met";
  return passed ? "pass" : "fail";
}

}  // namespace owct
