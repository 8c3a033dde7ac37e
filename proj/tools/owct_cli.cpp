// Command-line front end: norm, gch, ascent, cesaro, verify, random.
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "owct/generator.hpp"
#include "owct/harness.hpp"
#include "owct/subspace.hpp"

namespace {

using nlohmann::json;

struct Globals {
  std::uint64_t seed = 0;
  std::optional<double> tol_rank;
  std::optional<double> tol_norm;
  std::string format = "text";
};

std::uint64_t effective_seed(const Globals& g) {
  if (const char* env = std::getenv("ORLICZ_WCT_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("ORLICZ_WCT_SEED is not an unsigned integer: ") + env);
    }
  }
  return g.seed;
}

owct::Scenario load(const std::string& path, const Globals& g) {
  owct::Scenario s = owct::load_scenario(path);
  if (g.tol_rank) s.tolerances.rank = *g.tol_rank;
  if (g.tol_norm) s.tolerances.norm = *g.tol_norm;
  owct::validate(s);
  return s;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index k = 0; k < m.cols(); ++k) r[static_cast<std::size_t>(k)] = m(i, k);
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void print_matrix(std::ostream& os, const std::string& name, const Eigen::MatrixXd& m) {
  const Eigen::IOFormat f(8, 0, "  ", "\n", "  [", "]");
  os << name << " =\n" << m.format(f) << "\n";
}

int cmd_norm(const Globals& g, const std::string& path, const std::string& fn) {
  const owct::Scenario s = load(path, g);
  const owct::OrliczContext ctx = s.context();
  const owct::MeasurableFn f = s.function(fn);
  const double n = owct::luxemburg_norm(ctx, f, s.tolerances.norm);
  const double unit = n > 0.0 ? owct::modular(ctx, f / n) : 0.0;
  if (g.format == "json") {
    std::cout << json{{"function", fn}, {"young", s.phi().describe()}, {"norm", n}, {"modular_at_norm", unit}}.dump(2)
              << "\n";
  } else {
    std::cout << std::setprecision(12) << "N_Phi(f) = " << n << "\nI_Phi(f / N_Phi(f)) = " << unit << "\n";
  }
  return 0;
}

int cmd_gch(const Globals& g, const std::string& path, int samples) {
  const owct::Scenario s = load(path, g);
  const owct::YoungFunction phi = s.phi();
  const owct::YoungFunction psi = owct::complementary(phi);
  const owct::GchEstimate est =
      owct::estimate_gch_constant(s.cond_exp(), phi, psi, samples, effective_seed(g));
  if (g.format == "json") {
    std::cout << json{{"constant", est.constant},
                      {"label", "empirical"},
                      {"atom", est.atom},
                      {"f", to_vec(est.f)},
                      {"g", to_vec(est.g)},
                      {"pairs_evaluated", est.pairs_evaluated}}
                     .dump(2)
              << "\n";
  } else {
    const Eigen::IOFormat f(8, Eigen::DontAlignCols, ", ", ", ", "", "", "(", ")");
    std::cout << std::setprecision(10) << "empirical GCH constant: " << est.constant << " (atom "
              << est.atom << ", " << est.pairs_evaluated << " pairs)\n"
              << "worst f = " << est.f.transpose().format(f) << "\n"
              << "worst g = " << est.g.transpose().format(f) << "\n";
  }
  return 0;
}

int cmd_ascent(const Globals& g, const std::string& path) {
  const owct::Scenario s = load(path, g);
  const owct::WctOperator t = s.op();
  const owct::PowerChain chain = owct::power_chain(t.matrix(), 9, s.tolerances.rank);
  const auto a = owct::ascent_of(chain);
  const auto d = owct::descent_of(chain);
  std::vector<std::size_t> nd, rd;
  for (std::size_t k = 0; k < chain.powers.size(); ++k) {
    nd.push_back(chain.null_dim(k));
    rd.push_back(chain.range_dim(k));
  }
  owct::Scenario only = s;
  only.experiments = std::vector<std::string>{"structure"};
  const owct::VerificationReport rep = owct::run_verification(only, effective_seed(g), 0);
  if (g.format == "json") {
    json j = owct::report_to_json(rep, owct::timestamp_now());
    j["ascent"] = a ? json(*a) : json("exceeds k_max");
    j["descent"] = d ? json(*d) : json("exceeds k_max");
    j["null_dims"] = nd;
    j["range_dims"] = rd;
    std::cout << j.dump(2) << "\n";
  } else {
    auto show = [](const std::optional<int>& v) { return v ? std::to_string(*v) : "exceeds k_max"; };
    std::cout << "ascent = " << show(a) << ", descent = " << show(d) << "\nnull dims:";
    for (auto v : nd) std::cout << ' ' << v;
    std::cout << "\nrange dims:";
    for (auto v : rd) std::cout << ' ' << v;
    std::cout << "\n\n" << owct::report_to_text(rep);
  }
  return rep.exit_code();
}

int cmd_cesaro(const Globals& g, const std::string& path, int n, const std::string& mode) {
  if (n < 2) throw std::invalid_argument("--n must be >= 2");
  if (mode != "direct" && mode != "closed_form" && mode != "both")
    throw std::invalid_argument("--mode must be direct, closed_form or both");
  const owct::Scenario s = load(path, g);
  const owct::WctOperator t = s.op();
  const owct::CesaroResiduals r = owct::cesaro_residuals(t, n);
  json out{{"n", n}};
  std::ostringstream text;
  text << std::setprecision(10);
  for (auto [name, m] : {std::pair{"direct", owct::Mode::direct}, std::pair{"closed_form", owct::Mode::closed_form}}) {
    if (mode != "both" && mode != name) continue;
    const auto a = owct::cesaro_mean(t, n, m);
    const auto b = owct::b_n_operator(t, n, m);
    out[name] = {{"A_n", to_json(a)}, {"B_n", to_json(b)}};
    print_matrix(text, std::string("A_n (") + name + ")", a);
    print_matrix(text, std::string("B_n (") + name + ")", b);
  }
  out["residuals"] = {{"powers", r.powers},
                      {"telescoping", r.telescoping},
                      {"b_n_factor", r.b_n_factor},
                      {"a_closed_form", r.a_closed_form},
                      {"b_closed_form", r.b_closed_form}};
  text << "residual T^n/n = (n+1)/n A_{n+1} - A_n : " << r.powers << "\n"
       << "residual (I-T)A_n = (I-T^n)/n          : " << r.telescoping << "\n"
       << "residual I-A_n = (I-T)B_n              : " << r.b_n_factor << "\n"
       << "residual A_n closed form               : " << r.a_closed_form << "\n"
       << "residual B_n closed form               : " << r.b_closed_form << "\n";
  std::cout << (g.format == "json" ? out.dump(2) + "\n" : text.str());
  return r.max() <= 1e-10 ? 0 : 1;
}

int cmd_verify(const Globals& g, const std::string& path, int instances, const std::string& output) {
  const owct::Scenario s = load(path, g);
  const owct::VerificationReport rep = owct::run_verification(s, effective_seed(g), instances);
  owct::emit_report(rep, g.format, output);
  return rep.exit_code();
}

int cmd_random(const Globals& g, const std::string& profile, std::size_t atoms, std::size_t blocks,
               const std::string& kind, std::vector<double> params) {
  owct::YoungSpec young;
  young.kind = kind;
  if (!params.empty() || kind != "power_scaled") young.params = params;
  owct::Scenario s = owct::generate_random_instance(effective_seed(g), atoms, blocks,
                                                    owct::profile_from_string(profile), young);
  if (g.tol_rank) s.tolerances.rank = *g.tol_rank;
  if (g.tol_norm) s.tolerances.norm = *g.tol_norm;
  owct::validate(s);
  std::cout << owct::to_json(s).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted conditional type operators on Orlicz spaces: numerical checks"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed (ORLICZ_WCT_SEED overrides)");
  app.add_option("--tol-rank", g.tol_rank, "Relative rank tolerance")->check(CLI::PositiveNumber);
  app.add_option("--tol-norm", g.tol_norm, "Luxemburg norm bisection tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string scenario, function, mode = "both", output, profile = "generic", kind = "power_scaled";
  int samples = 200, n = 10, instances = 0;
  std::size_t atoms = 6, blocks = 2;
  std::vector<double> params;

  auto* norm = app.add_subcommand("norm", "Luxemburg norm of a scenario function");
  norm->add_option("--scenario", scenario, "Scenario JSON")->required();
  norm->add_option("--function", function, "Function name, u, w, or comma list")->required();

  auto* gch = app.add_subcommand("gch", "Empirical conditional Hoelder constant");
  gch->add_option("--scenario", scenario, "Scenario JSON")->required();
  gch->add_option("--samples", samples, "Random (f, g) pairs")->check(CLI::PositiveNumber);

  auto* ascent = app.add_subcommand("ascent", "Ascent, descent and structure claims");
  ascent->add_option("--scenario", scenario, "Scenario JSON")->required();

  auto* cesaro = app.add_subcommand("cesaro", "Cesaro means A_n, B_n and identity residuals");
  cesaro->add_option("--scenario", scenario, "Scenario JSON")->required();
  cesaro->add_option("--n", n, "Index n >= 2");
  cesaro->add_option("--mode", mode, "direct, closed_form or both");

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--scenario", scenario, "Scenario JSON")->required();
  verify->add_option("--instances", instances, "Random instances of the same size")->check(CLI::NonNegativeNumber);
  verify->add_option("--output", output, "Report path (default stdout)");

  auto* random = app.add_subcommand("random", "Print a random scenario");
  random->add_option("--profile", profile, "generic, nilpotent_h, contracting_h, expanding_h, sparse_support");
  random->add_option("--atoms", atoms, "Atom count (1..64)");
  random->add_option("--blocks", blocks, "Block count (1..atoms)");
  random->add_option("--young", kind, "Young function kind");
  random->add_option("--params", params, "Young function parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; usage errors exit 2.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*norm) return cmd_norm(g, scenario, function);
    if (*gch) return cmd_gch(g, scenario, samples);
    if (*ascent) return cmd_ascent(g, scenario);
    if (*cesaro) return cmd_cesaro(g, scenario, n, mode);
    if (*verify) return cmd_verify(g, scenario, instances, output);
    if (*random) return cmd_random(g, profile, atoms, blocks, kind, params);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
