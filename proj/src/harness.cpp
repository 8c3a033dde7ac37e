#include "owct/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "owct/detail/random.hpp"
#include "owct/generator.hpp"
#include "owct/subspace.hpp"

namespace owct {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

ClaimResult registered_claim(const std::string& id) { return make_claim(id, anchor_of(id)); }

void fail(ClaimResult& c, const std::string& what) {
  if (c.passed) c.detail = what;
  c.passed = false;
}

std::vector<ClaimResult> young_group(const YoungFunction& phi, const YoungFunction& psi) {
  const GridSpec grid{1e-6, 1e6, 61, true};
  std::vector<ClaimResult> out;

  auto from_growth = [&](const std::string& id, GrowthKind kind) {
    ClaimResult c = registered_claim(id);
    const GrowthReport g = check_growth_condition(kind, phi, &psi, 0.0, grid);
    c.passed = g.holds_on_grid;
    c.residual = g.witness_constant.value_or(0.0);
    c.detail = phi.describe() + " / " + psi.describe() + ", " + std::to_string(g.points_checked) +
               " grid points";
    if (g.counterexample)
      c.detail += "; violation at (" + fmt(g.counterexample->first) + ", " +
                  fmt(g.counterexample->second) + ")";
    return c;
  };
  out.push_back(from_growth("young.young_inequality", GrowthKind::young_ineq));
  out.push_back(from_growth("young.inverse_product", GrowthKind::inverse_product));

  ClaimResult rt = registered_claim("young.inverse_roundtrip");
  for (const YoungFunction* f : {&phi, &psi}) {
    for (double x : grid.points()) {
      const double inv = generalized_inverse(*f, x);
      const double back = (*f)(inv);
      const double over = back - x;
      rt.residual = std::max(rt.residual, over / (1.0 + x));
      if (over > 1e-8 * (1.0 + x)) fail(rt, f->describe() + ": Phi(Phi^-1(x)) > x at x=" + fmt(x));
      const double fx = (*f)(x);
      if (!std::isfinite(fx)) continue;
      const double short_by = x - generalized_inverse(*f, fx);
      rt.residual = std::max(rt.residual, short_by / (1.0 + x));
      if (short_by > 1e-8 * (1.0 + x)) fail(rt, f->describe() + ": Phi^-1(Phi(x)) < x at x=" + fmt(x));
    }
  }
  out.push_back(rt);
  return out;
}

std::vector<ClaimResult> gch_group(const Scenario& s, const WctOperator& t, const YoungFunction& phi,
                                   const YoungFunction& psi, std::uint64_t seed,
                                   const VerifyOptions& opts) {
  ClaimResult gch = registered_claim("condexp.gch_constant");
  const GchEstimate est = estimate_gch_constant(t.cond_exp(), phi, psi, opts.gch_samples, seed);
  gch.passed = std::isfinite(est.constant);
  gch.residual = est.constant;
  gch.detail = "empirical lower bound C=" + fmt(est.constant) + " at atom " +
               std::to_string(est.atom) + " over " + std::to_string(est.pairs_evaluated) + " pairs";

  ClaimResult bnd = registered_claim("wct.boundedness");
  const double m = bound_multiplier(t, psi);
  if (!std::isfinite(m)) {
    bnd.hypothesis = Hypothesis::not_met;
    bnd.detail = "w Psi^-1(E(Psi(|u|))) is not essentially bounded";
    return {gch, bnd};
  }
  bnd.hypothesis = Hypothesis::met;
  const double bound = est.constant * m + 1e-6;
  const OrliczContext ctx{s.space(), phi};
  detail::Rng rng = detail::split(seed, 1);
  double worst = 0.0;
  for (int k = 0; k < opts.boundedness_samples; ++k) {
    const MeasurableFn f = detail::random_function(t.size(), rng);
    const double nf = luxemburg_norm(ctx, f, s.tolerances.norm);
    if (!(nf > 0.0)) continue;
    const double r = luxemburg_norm(ctx, t.apply(f), s.tolerances.norm) / nf;
    worst = std::max(worst, r);
    if (r > bound) fail(bnd, "ratio " + fmt(r) + " exceeds C*M + 1e-6 = " + fmt(bound));
  }
  bnd.residual = worst - est.constant * m;
  if (bnd.passed)
    bnd.detail = "max N(Tf)/N(f)=" + fmt(worst) + " <= C*M=" + fmt(est.constant * m) + " (M=" + fmt(m) + ")";
  return {gch, bnd};
}

ClaimResult iterate_claim(const WctOperator& t) {
  ClaimResult c = registered_claim("wct.iterate_formula");
  for (int n = 1; n <= 6; ++n) {
    const OperatorMatrix d = iterate(t, n, Mode::direct);
    const OperatorMatrix cf = iterate(t, n, Mode::closed_form);
    const double scale = 1.0 + d.cwiseAbs().maxCoeff();
    const double r = (d - cf).cwiseAbs().maxCoeff() / scale;
    c.residual = std::max(c.residual, r);
    if (r > 1e-9) fail(c, "n=" + std::to_string(n) + " relative residual " + fmt(r));
  }
  return c;
}

ClaimResult range_claim(const Scenario& s, const WctOperator& t, const YoungFunction& psi,
                        std::uint64_t seed, const VerifyOptions& opts) {
  ClaimResult c = registered_claim("wct.range_support");
  MeasurableFn u_abs = t.u().cwiseAbs();
  MeasurableFn avg(u_abs.size());
  for (Eigen::Index i = 0; i < u_abs.size(); ++i) avg(i) = psi(u_abs(i));
  avg = t.cond_exp().apply_extended(avg);
  MeasurableFn weight(avg.size());
  for (Eigen::Index i = 0; i < avg.size(); ++i) {
    const double inv = generalized_inverse(psi, avg(i), 1e-13);
    weight(i) = t.w()(i) == 0.0 ? 0.0 : t.w()(i) * inv;
  }
  const IndexSet h_set = support(weight, 1e-10);
  detail::Rng rng = detail::split(seed, 2);
  for (int k = 0; k < opts.range_samples; ++k) {
    const MeasurableFn tf = t.apply(detail::random_function(t.size(), rng));
    if (!is_subset(support(tf), h_set)) fail(c, "S(Tf) not inside H");
  }
  const std::size_t rank = rank_info(t.matrix(), s.tolerances.rank).rank;
  c.residual = static_cast<double>(rank);
  if (rank > h_set.size())
    fail(c, "rank " + std::to_string(rank) + " > |H| = " + std::to_string(h_set.size()));
  if (c.passed)
    c.detail = "rank " + std::to_string(rank) + " <= |H| = " + std::to_string(h_set.size()) +
               "; range closed (finite dimensions)";
  return c;
}

std::vector<ClaimResult> power_group(const WctOperator& t, const YoungFunction& phi,
                                     const YoungFunction& psi, std::uint64_t seed,
                                     const VerifyOptions& opts) {
  const PowerBoundedReport rep = power_bounded_report(t, phi, psi, opts.power_n_max, opts.norm_samples, seed);
  ClaimResult pb = registered_claim("wct.power_bounded");
  // Over a finite horizon, unboundedness shows as growth of the tail ratio.
  const std::size_t k = rep.norms.size();
  const bool tail_growth = rep.norms[k - 1] > rep.norms[k - 2] * (1.0 + 1e-6) + 1e-300;
  const bool bounded = !tail_growth && !rep.growth_detected;
  pb.passed = rep.criterion_holds == bounded;
  pb.residual = rep.sup_norm_estimate;
  pb.detail = std::string("criterion ") + (rep.criterion_holds ? "true" : "false") +
              (bounded ? ", norms bounded" : ", growth confirmed") + "; sup_{n<=" +
              std::to_string(opts.power_n_max) + "} ||T^n|| ~ " + fmt(rep.sup_norm_estimate) +
              " at n=" + std::to_string(rep.sup_attained_at) + ", ||h||_inf=" + fmt(rep.h_sup);

  ClaimResult hp = registered_claim("wct.h_powers_bounded");
  const bool h_le_one = rep.h_sup <= 1.0 + 1e-12;
  hp.passed = rep.h_powers_bounded == h_le_one;
  hp.residual = rep.h_power_norms.back();
  hp.detail = "sequence read as ||h^n||_inf; ||h||_inf=" + fmt(rep.h_sup) +
              (rep.h_powers_bounded ? ", bounded" : ", unbounded");
  return {pb, hp};
}

std::vector<ClaimResult> cesaro_group(const WctOperator& t, const VerifyOptions& opts) {
  ClaimResult id = registered_claim("wct.cesaro_identities");
  ClaimResult cf = registered_claim("wct.b_n_closed_form");
  for (int n = 2; n <= opts.cesaro_n_max; ++n) {
    const CesaroResiduals r = cesaro_residuals(t, n);
    const double ri = std::max({r.powers, r.telescoping, r.b_n_factor});
    const double rc = std::max(r.a_closed_form, r.b_closed_form);
    id.residual = std::max(id.residual, ri);
    cf.residual = std::max(cf.residual, rc);
    if (ri > 1e-10) fail(id, "n=" + std::to_string(n) + " residual " + fmt(ri));
    if (rc > 1e-10) fail(cf, "n=" + std::to_string(n) + " residual " + fmt(rc));
  }
  return {id, cf};
}

}  // namespace

const std::vector<ClaimSpec>& claim_registry() {
  static const std::vector<ClaimSpec> reg{
      {"young.young_inequality", "xy <= Phi(x) + Psi(y)", "young"},
      {"young.inverse_product", "x < Phi^-1(x) Psi^-1(x) <= 2x", "young"},
      {"young.inverse_roundtrip", "Phi(Phi^-1(x)) <= x <= Phi^-1(Phi(x))", "young"},
      {"condexp.pull_out", "E(fg) = E(f)g for measurable g", "condexp"},
      {"condexp.jensen", "Phi(E(f)) <= E(Phi(f))", "condexp"},
      {"condexp.positivity", "f >= 0 => E(f) >= 0; f > 0 => E(f) > 0", "condexp"},
      {"condexp.support_containment", "f >= 0 => S(f) subset S(E(f))", "condexp"},
      {"condexp.support_equality", "S(E(f)) = S(E(Phi(f))) for f >= 0", "condexp"},
      {"condexp.contraction", "N_Phi(E(f)) <= N_Phi(f)", "condexp"},
      {"condexp.idempotence", "E(E(f)) = E(f)", "condexp"},
      {"condexp.gch_constant", "E|fg| <= C Phi^-1(E Phi|f|) Psi^-1(E Psi|g|), empirical C", "gch"},
      {"wct.boundedness", "N_Phi(Tf) <= C M N_Phi(f), M = ||w Psi^-1(E(Psi(u)))||_inf", "gch"},
      {"wct.iterate_formula", "T^n = M_{h^(n-1)} M_w E M_u, h = E(uw)", "iterate"},
      {"wct.range_support", "S(Tf) inside H = S(w Psi^-1(E(Psi(|u|)))); rank(T) <= |H|", "range"},
      {"wct.power_bounded", "T power bounded iff |h| < 1 on the criterion support", "power"},
      {"wct.h_powers_bounded", "{||h^n||_inf} bounded iff ||h||_inf <= 1", "power"},
      {"wct.cesaro_identities",
       "T^n/n = (n+1)/n A_{n+1} - A_n; (I-T)A_n = (I-T^n)/n; I - A_n = (I-T)B_n", "cesaro"},
      {"wct.b_n_closed_form", "A_n = (I + M_{v_n}T)/n; B_n = (M_{w_n}T + (n-1)I)/n", "cesaro"},
      {"structure.ascent_bound", "ascent(T) <= 2; N(T^2) = N(T^(2+n))", "structure"},
      {"structure.descent_bound", "h bounded away from 0 => descent(T) <= 2; R(T^(n+2)) = R(T^2)",
       "structure"},
      {"structure.range_null_intersection", "R(T^2) ∩ N(T^m) = {0}", "structure"},
      {"structure.range_null_sum", "h bounded away from 0 => R(T^n) + N(T^2) = whole space",
       "structure"},
      {"structure.symbol_decomposition", "R(M_h T) + N(M_h T) = whole space", "structure"},
      {"structure.dense_sum",
       "R(T^2) + N(T^2) dense (equal in finite dimensions), R(T^2) ∩ N(T^2) = {0}", "structure"},
      {"structure.ascent_i_minus_t", "|h| < 1 on the criterion support => ascent(I - T) <= 1",
       "structure"},
      {"structure.direct_sum", "|h| < 1 on the criterion support => R(I - T) ⊕ N(I - T)",
       "structure"},
      {"structure.ergodic",
       "|h| < 1 on the criterion support => I - T invertible iff R(I - T) full; "
       "B_n f -> (I - T)^-1 f; A_n f -> T-invariant limit",
       "structure"},
  };
  return reg;
}

const std::vector<std::string>& experiment_groups() {
  static const std::vector<std::string> groups{"young", "condexp", "gch",    "iterate",
                                               "range", "power",   "cesaro", "structure"};
  return groups;
}

const std::string& anchor_of(const std::string& claim_id) {
  for (const auto& c : claim_registry())
    if (c.id == claim_id) return c.anchor;
  throw std::out_of_range("unknown claim id '" + claim_id + "'");
}

std::vector<ClaimResult> run_experiment(const Scenario& s, const std::string& group,
                                        std::uint64_t seed, const VerifyOptions& opts,
                                        bool* ill_conditioned) {
  const YoungFunction phi = s.phi();
  const YoungFunction psi = complementary(phi);
  const WctOperator t = s.op();
  std::vector<ClaimResult> out;
  if (group == "young") {
    out = young_group(phi, psi);
  } else if (group == "condexp") {
    out = check_condexp_laws(t.cond_exp(), phi, opts.condexp_trials,
                             std::max(s.tolerances.compare, 1e-10), seed);
  } else if (group == "gch") {
    out = gch_group(s, t, phi, psi, seed, opts);
  } else if (group == "iterate") {
    out = {iterate_claim(t)};
  } else if (group == "range") {
    out = {range_claim(s, t, psi, seed, opts)};
  } else if (group == "power") {
    out = power_group(t, phi, psi, seed, opts);
  } else if (group == "cesaro") {
    out = cesaro_group(t, opts);
  } else if (group == "structure") {
    StructureOptions so;
    so.seed = seed;
    so.ergodic_samples = opts.ergodic_samples;
    so.psi = &psi;
    const StructureReport rep = verify_structure_theorems(t, s.context(), s.tolerances.rank, so);
    if (ill_conditioned) *ill_conditioned = rep.ill_conditioned;
    out = rep.claims;
  } else {
    throw std::invalid_argument("unknown experiment '" + group + "'");
  }
  for (auto& c : out) c.anchor = anchor_of(c.claim_id);
  return out;
}

bool VerificationReport::failed() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const ReportEntry& e) { return e.result.counts_as_failure(); });
}

VerificationReport run_verification(const Scenario& s, std::uint64_t seed, int instances,
                                    const VerifyOptions& opts) {
  validate(s);
  if (instances < 0) throw std::invalid_argument("instances must be >= 0");
  const std::vector<std::string> groups = s.experiments.value_or(experiment_groups());
  for (const auto& g : groups)
    if (std::find(experiment_groups().begin(), experiment_groups().end(), g) == experiment_groups().end())
      throw std::invalid_argument("unknown experiment '" + g + "'");

  VerificationReport rep;
  rep.fingerprint = {seed, s.n_atoms(), s.n_blocks(), instances, s.name};
  const nlohmann::json scenario_fp = {{"seed", seed},
                                      {"n_atoms", s.n_atoms()},
                                      {"n_blocks", s.n_blocks()},
                                      {"scenario", s.name}};

  std::vector<ClaimResult> scenario_claims;
  for (const auto& g : groups)
    for (auto& c : run_experiment(s, g, seed, opts)) scenario_claims.push_back(std::move(c));

  // Registry order keeps reports stable.
  auto registry_index = [](const std::string& id) {
    const auto& reg = claim_registry();
    for (std::size_t i = 0; i < reg.size(); ++i)
      if (reg[i].id == id) return i;
    return reg.size();
  };
  std::stable_sort(scenario_claims.begin(), scenario_claims.end(), [&](const auto& a, const auto& b) {
    return registry_index(a.claim_id) < registry_index(b.claim_id);
  });
  for (auto& c : scenario_claims) rep.entries.push_back({std::move(c), "scenario", scenario_fp});

  if (instances == 0 || groups.empty()) return rep;

  struct Aggregate {
    ClaimResult result;
    int met = 0;
    int total = 0;
    nlohmann::json fingerprint;
  };
  std::map<std::size_t, Aggregate> agg;
  const YoungSpec young = s.young;
  for (int k = 0; k < instances; ++k) {
    const Profile profile = all_profiles()[static_cast<std::size_t>(k) % all_profiles().size()];
    std::vector<ClaimResult> claims;
    std::uint64_t inst_seed = 0;
    for (int attempt = 0;; ++attempt) {
      inst_seed = detail::split(seed, static_cast<std::uint64_t>(k) * 64 + attempt)();
      const Scenario inst = generate_random_instance(inst_seed, s.n_atoms(), s.n_blocks(), profile, young);
      bool ill = false;
      claims.clear();
      for (const auto& g : groups)
        for (auto& c : run_experiment(inst, g, inst_seed, opts, &ill)) claims.push_back(std::move(c));
      if (!ill || attempt == 15) break;
      ++rep.redrawn;
    }
    const nlohmann::json fp = {{"instance_seed", inst_seed}, {"profile", to_string(profile)},
                               {"n_atoms", s.n_atoms()},     {"n_blocks", s.n_blocks()}};
    for (auto& c : claims) {
      Aggregate& a = agg[registry_index(c.claim_id)];
      if (a.total == 0) {
        a.result = registered_claim(c.claim_id);
        a.result.hypothesis = Hypothesis::not_met;
        a.fingerprint = fp;
      }
      ++a.total;
      if (c.hypothesis == Hypothesis::not_met) continue;
      ++a.met;
      a.result.hypothesis = c.hypothesis == Hypothesis::none ? Hypothesis::none : Hypothesis::met;
      a.result.residual = std::max(a.result.residual, c.residual);
      if (!c.passed && a.result.passed) {
        a.result.passed = false;
        a.result.detail = c.detail;
        a.fingerprint = fp;
      }
    }
  }
  for (auto& [idx, a] : agg) {
    const std::string counts = std::to_string(a.met) + "/" + std::to_string(a.total) +
                               " instances met the hypothesis";
    a.result.detail = a.result.detail.empty() ? counts : counts + "; first failure: " + a.result.detail;
    rep.entries.push_back({a.result, "random", a.fingerprint});
  }
  return rep;
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

nlohmann::json report_to_json(const VerificationReport& r, const std::string& generated_at) {
  nlohmann::json j;
  j["tool_version"] = r.tool_version;
  j["generated_at"] = generated_at;
  j["fingerprint"] = {{"seed", r.fingerprint.seed},
                      {"n_atoms", r.fingerprint.n_atoms},
                      {"n_blocks", r.fingerprint.n_blocks},
                      {"instances", r.fingerprint.instances},
                      {"scenario", r.fingerprint.scenario}};
  j["redrawn"] = r.redrawn;
  j["claims"] = nlohmann::json::array();
  for (const auto& e : r.entries) {
    const ClaimResult& c = e.result;
    j["claims"].push_back({{"claim_id", c.claim_id},
                           {"anchor", c.anchor},
                           {"hypothesis", to_string(c.hypothesis)},
                           {"status", c.status()},
                           {"residual", std::isfinite(c.residual) ? nlohmann::json(c.residual) : nlohmann::json()},
                           {"fingerprint", e.fingerprint},
                           {"detail", c.detail},
                           {"scope", e.scope}});
  }
  j["passed"] = !r.failed();
  return j;
}

std::string report_to_text(const VerificationReport& r) {
  const std::vector<std::string> header{"claim", "scope", "status", "residual", "anchor"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : r.entries)
    rows.push_back({e.result.claim_id, e.scope, e.result.status(), fmt(e.result.residual), e.result.anchor});
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());

  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      os << cells[i];
      if (i + 1 < cells.size()) os << std::string(width[i] - cells[i].size() + 2, ' ');
    }
  };
  line(header);
  os << '\n';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    line(rows[k]);
    const auto& e = r.entries[k];
    if (e.result.counts_as_failure()) os << "  [" << e.fingerprint.dump() << "] " << e.result.detail;
    os << '\n';
  }
  return os.str();
}

void emit_report(const VerificationReport& r, const std::string& format, const std::string& path) {
  std::string body;
  if (format == "json") {
    body = report_to_json(r, timestamp_now()).dump(2) + "\n";
  } else if (format == "text") {
    body = report_to_text(r);
  } else {
    throw std::runtime_error("unknown report format '" + format + "'");
  }
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report to '" + path + "'");
  out << body;
  if (!out) throw std::runtime_error("cannot write report to '" + path + "'");
}

}  // namespace owct
