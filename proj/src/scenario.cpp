#include "owct/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace owct {

MeasurableFn to_fn(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

namespace {

template <class T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ScenarioError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("field '") + key + "' has the wrong type: " + e.what());
  }
}

void check_length(const std::vector<double>& v, std::size_t n, const std::string& name) {
  if (v.size() != n)
    throw ScenarioError("field '" + name + "' has " + std::to_string(v.size()) +
                        " values, expected " + std::to_string(n));
  for (double x : v)
    if (!std::isfinite(x)) throw ScenarioError("field '" + name + "' contains a non-finite value");
}

}  // namespace

FiniteMeasureSpace Scenario::space() const { return FiniteMeasureSpace(atoms); }

Partition Scenario::partition() const { return Partition(blocks, atoms.size()); }

CondExp Scenario::cond_exp() const { return CondExp(space(), partition()); }

WctOperator Scenario::op() const { return WctOperator(to_fn(u), to_fn(w), cond_exp()); }

MeasurableFn Scenario::function(const std::string& key) const {
  if (key == "u") return to_fn(u);
  if (key == "w") return to_fn(w);
  if (auto it = functions.find(key); it != functions.end()) return to_fn(it->second);
  std::vector<double> vals;
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ScenarioError("unknown function '" + key + "'");
    }
  }
  check_length(vals, atoms.size(), "function");
  return to_fn(vals);
}

void validate(const Scenario& s) {
  if (s.atoms.empty()) throw ScenarioError("field 'atoms' must not be empty");
  for (double m : s.atoms)
    if (!(m > 0.0) || !std::isfinite(m)) throw ScenarioError("field 'atoms': atom weight must be > 0");
  try {
    Partition(s.blocks, s.atoms.size());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("field 'blocks': ") + e.what());
  }
  check_length(s.u, s.atoms.size(), "u");
  check_length(s.w, s.atoms.size(), "w");
  for (const auto& [name, v] : s.functions) check_length(v, s.atoms.size(), "functions." + name);
  try {
    s.young.build();
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("field 'young': ") + e.what());
  }
  const Tolerances& t = s.tolerances;
  if (!(t.rank > 0.0) || !(t.norm > 0.0) || !(t.compare > 0.0))
    throw ScenarioError("field 'tolerances': values must be > 0");
}

Scenario parse_scenario(const nlohmann::json& j) {
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
  Scenario s;
  s.name = j.value("name", std::string{});
  s.atoms = field<std::vector<double>>(j, "atoms");
  for (const auto& b : field<std::vector<std::vector<long long>>>(j, "blocks")) {
    IndexSet set;
    for (long long i : b) {
      if (i < 0) throw ScenarioError("field 'blocks': atom index out of range");
      set.push_back(static_cast<std::size_t>(i));
    }
    s.blocks.push_back(set);
  }
  s.u = field<std::vector<double>>(j, "u");
  s.w = field<std::vector<double>>(j, "w");
  if (j.contains("young")) {
    const auto& y = j.at("young");
    s.young.kind = field<std::string>(y, "kind");
    if (y.contains("params")) {
      s.young.params = field<std::vector<double>>(y, "params");
    } else if (y.contains("p")) {
      s.young.params = {field<double>(y, "p")};
    } else {
      s.young.params.clear();
    }
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    s.tolerances.rank = t.value("rank", s.tolerances.rank);
    s.tolerances.norm = t.value("norm", s.tolerances.norm);
    s.tolerances.compare = t.value("compare", s.tolerances.compare);
  }
  if (j.contains("experiments")) s.experiments = field<std::vector<std::string>>(j, "experiments");
  if (j.contains("functions"))
    s.functions = field<std::map<std::string, std::vector<double>>>(j, "functions");
  validate(s);
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return parse_scenario(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

nlohmann::json to_json(const Scenario& s) {
  nlohmann::json j;
  if (!s.name.empty()) j["name"] = s.name;
  j["atoms"] = s.atoms;
  j["blocks"] = s.blocks;
  j["u"] = s.u;
  j["w"] = s.w;
  j["young"] = {{"kind", s.young.kind}, {"params", s.young.params}};
  j["tolerances"] = {{"rank", s.tolerances.rank},
                     {"norm", s.tolerances.norm},
                     {"compare", s.tolerances.compare}};
  if (s.experiments) j["experiments"] = *s.experiments;
  if (!s.functions.empty()) j["functions"] = s.functions;
  return j;
}

}  // namespace owct
