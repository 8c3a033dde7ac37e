#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "owct/condexp.hpp"
#include "owct/orlicz.hpp"
#include "owct/wct.hpp"

namespace owct {

/// Malformed or inconsistent scenario input; the message names the field.
class ScenarioError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct YoungSpec {
  std::string kind = "power_scaled";
  std::vector<double> params{2.0};

  YoungFunction build() const { return YoungFunction::from_spec(kind, params); }
};

struct Tolerances {
  double rank = 1e-8;
  double norm = 1e-10;
  double compare = 1e-10;
};

/// One verification input. Blocks use 0-based atom indices.
struct Scenario {
  std::string name;
  std::vector<double> atoms;
  std::vector<IndexSet> blocks;
  std::vector<double> u;
  std::vector<double> w;
  YoungSpec young;
  Tolerances tolerances;
  /// Experiment groups to run; nullopt means the full suite.
  std::optional<std::vector<std::string>> experiments;
  /// Named test functions for the norm subcommand.
  std::map<std::string, std::vector<double>> functions;

  std::size_t n_atoms() const { return atoms.size(); }
  std::size_t n_blocks() const { return blocks.size(); }

  FiniteMeasureSpace space() const;
  Partition partition() const;
  CondExp cond_exp() const;
  WctOperator op() const;
  YoungFunction phi() const { return young.build(); }
  OrliczContext context() const { return {space(), phi()}; }
  /// Looks up a named function, "u", "w", or parses a comma-separated list.
  MeasurableFn function(const std::string& name_or_values) const;
};

/// Throws ScenarioError naming the offending field.
void validate(const Scenario& s);

Scenario parse_scenario(const nlohmann::json& j);
/// Parse errors carry the byte position reported by the JSON parser.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);
nlohmann::json to_json(const Scenario& s);

MeasurableFn to_fn(const std::vector<double>& v);

}  // namespace owct
