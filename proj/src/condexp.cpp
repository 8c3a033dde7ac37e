#include "owct/condexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "owct/detail/ascent.hpp"
#include "owct/detail/random.hpp"
#include "owct/orlicz.hpp"

namespace owct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_vec(const MeasurableFn& f) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < f.size(); ++i) os << (i ? ", " : "") << f(i);
  os << ")";
  return os.str();
}

MeasurableFn random_block_constant(const Partition& p, detail::Rng& rng) {
  MeasurableFn g(static_cast<Eigen::Index>(p.n_atoms()));
  for (const auto& b : p.blocks()) {
    const double v = detail::uniform(rng, -3.0, 3.0);
    for (std::size_t i : b) g(static_cast<Eigen::Index>(i)) = v;
  }
  return g;
}

MeasurableFn map_values(const MeasurableFn& f, const YoungFunction& phi) {
  MeasurableFn out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) out(i) = phi(f(i));
  return out;
}

}  // namespace

CondExp::CondExp(FiniteMeasureSpace space, Partition partition)
    : space_(std::move(space)), partition_(std::move(partition)) {
  if (partition_.n_atoms() != space_.size())
    throw std::invalid_argument("partition does not cover the measure space");
  for (const auto& b : partition_.blocks()) {
    double m = 0.0;
    for (std::size_t i : b) m += space_.weight(i);
    block_mass_.push_back(m);
  }
}

MeasurableFn CondExp::operator()(const MeasurableFn& f) const {
  if (static_cast<std::size_t>(f.size()) != size())
    throw std::invalid_argument("function length does not match atom count");
  MeasurableFn out(f.size());
  const auto& blocks = partition_.blocks();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    double s = 0.0;
    for (std::size_t i : blocks[k]) s += f(static_cast<Eigen::Index>(i)) * space_.weight(i);
    const double avg = s / block_mass_[k];
    for (std::size_t i : blocks[k]) out(static_cast<Eigen::Index>(i)) = avg;
  }
  return out;
}

MeasurableFn CondExp::apply_extended(const MeasurableFn& f) const {
  if (static_cast<std::size_t>(f.size()) != size())
    throw std::invalid_argument("function length does not match atom count");
  MeasurableFn out(f.size());
  const auto& blocks = partition_.blocks();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    double s = 0.0;
    for (std::size_t i : blocks[k]) {
      const double v = f(static_cast<Eigen::Index>(i));
      if (v < 0.0) throw std::invalid_argument("extended conditional expectation needs f >= 0");
      s += std::isinf(v) ? kInf : v * space_.weight(i);
    }
    const double avg = std::isinf(s) ? kInf : s / block_mass_[k];
    for (std::size_t i : blocks[k]) out(static_cast<Eigen::Index>(i)) = avg;
  }
  return out;
}

Eigen::MatrixXd CondExp::matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const auto& blocks = partition_.blocks();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (std::size_t i : blocks[k]) {
      for (std::size_t j : blocks[k]) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            space_.weight(j) / block_mass_[k];
      }
    }
  }
  return m;
}

double pairing(const FiniteMeasureSpace& space, const MeasurableFn& f, const MeasurableFn& g) {
  return (f.array() * g.array() * space.weights().array()).sum();
}

std::vector<ClaimResult> check_condexp_laws(const CondExp& e, const YoungFunction& phi, int trials,
                                            double tol, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const std::size_t n = e.size();
  const OrliczContext ctx{e.space(), phi};

  ClaimResult pull_out = make_claim("condexp.pull_out", "E(fg) = E(f)g for measurable g");
  ClaimResult jensen = make_claim("condexp.jensen", "Phi(E(f)) <= E(Phi(f))");
  ClaimResult positivity = make_claim("condexp.positivity", "f >= 0 => E(f) >= 0; f > 0 => E(f) > 0");
  ClaimResult containment = make_claim("condexp.support_containment", "f >= 0 => S(f) subset S(E(f))");
  ClaimResult support_eq = make_claim("condexp.support_equality", "S(E(f)) = S(E(Phi(f))) for f >= 0");
  ClaimResult contraction = make_claim("condexp.contraction", "N_Phi(E(f)) <= N_Phi(f)");
  ClaimResult idempotence = make_claim("condexp.idempotence", "E(E(f)) = E(f)");

  // Supports of E(f) and E(Phi(f)) differ whenever Phi vanishes on a
  // nontrivial interval, so the equality is only claimed for a_phi = 0.
  if (phi.a_phi() > 0.0) {
    support_eq.hypothesis = Hypothesis::not_met;
    support_eq.detail = "Phi vanishes on [0, a_phi] with a_phi = " + std::to_string(phi.a_phi());
  }

  auto fail = [](ClaimResult& c, const std::string& what) {
    if (c.passed) c.detail = what;
    c.passed = false;
  };

  detail::Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const MeasurableFn f = detail::random_function(n, rng);
    const MeasurableFn g = random_block_constant(e.partition(), rng);
    const MeasurableFn ef = e(f);

    const MeasurableFn lhs = e(f.cwiseProduct(g));
    const MeasurableFn rhs = ef.cwiseProduct(g);
    const double r_pull = (lhs - rhs).cwiseAbs().maxCoeff();
    pull_out.residual = std::max(pull_out.residual, r_pull);
    if (r_pull > tol * (1.0 + rhs.cwiseAbs().maxCoeff())) fail(pull_out, "f=" + fmt_vec(f));

    const MeasurableFn e_phi = e.apply_extended(map_values(f, phi));
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double l = phi(ef(i));
      const double r = e_phi(i);
      if (std::isinf(r)) continue;
      const double excess = l - r;
      jensen.residual = std::max(jensen.residual, excess);
      if (excess > tol * (1.0 + std::abs(r))) fail(jensen, "f=" + fmt_vec(f));
    }

    // Nonnegative sums cannot cancel, so supports of f >= 0 are exact here.
    const MeasurableFn fp = f.cwiseAbs();
    const MeasurableFn efp = e(fp);
    const MeasurableFn strictly = fp.array() + 0.1;
    if (efp.minCoeff() < 0.0 || e(strictly).minCoeff() <= 0.0) fail(positivity, "f=" + fmt_vec(fp));

    const IndexSet s_f = support(fp, 0.0);
    const IndexSet s_ef = support(efp, 0.0);
    if (!is_subset(s_f, s_ef)) fail(containment, "f=" + fmt_vec(fp));

    if (support_eq.hypothesis != Hypothesis::not_met) {
      const IndexSet s_ephi = support(e.apply_extended(map_values(fp, phi)), 0.0);
      if (s_ef != s_ephi) fail(support_eq, "f=" + fmt_vec(fp));
    }

    const double n_ef = luxemburg_norm(ctx, ef);
    const double n_f = luxemburg_norm(ctx, f);
    const double excess = n_ef - n_f;
    contraction.residual = std::max(contraction.residual, excess);
    if (excess > tol * (1.0 + n_f)) fail(contraction, "f=" + fmt_vec(f));

    const double r_idem = (e(ef) - ef).cwiseAbs().maxCoeff();
    idempotence.residual = std::max(idempotence.residual, r_idem);
    if (r_idem > tol * (1.0 + ef.cwiseAbs().maxCoeff())) fail(idempotence, "f=" + fmt_vec(f));
  }
  return {pull_out, jensen, positivity, containment, support_eq, contraction, idempotence};
}

void audit_complementary_pair(const YoungFunction& phi, const YoungFunction& psi) {
  const GridSpec grid{1e-2, 1e2, 13, true};
  const auto young = check_growth_condition(GrowthKind::young_ineq, phi, &psi, 0.0, grid);
  bool ok = young.holds_on_grid;
  for (double y : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    if (!ok) break;
    if (y >= psi.b_phi() * (1.0 - 1e-9)) continue;
    const double expected = conjugate_value(phi, y);
    const double got = psi(y);
    if (!std::isfinite(got) || std::abs(got - expected) > 1e-6 * (1.0 + std::abs(expected)))
      ok = false;
  }
  if (!ok)
    throw std::invalid_argument("psi (" + psi.describe() +
                                ") is not the complementary function of phi (" + phi.describe() + ")");
}

GchEstimate estimate_gch_constant(const CondExp& e, const YoungFunction& phi,
                                  const YoungFunction& psi, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  audit_complementary_pair(phi, psi);
  const std::size_t n = e.size();
  const auto& blocks = e.partition().blocks();

  struct Ratio {
    double value = 0.0;
    std::size_t atom = 0;
  };
  auto ratio = [&](const MeasurableFn& f, const MeasurableFn& g) {
    const MeasurableFn num = e(f.cwiseProduct(g).cwiseAbs());
    const MeasurableFn a = e.apply_extended(map_values(f.cwiseAbs(), phi));
    const MeasurableFn b = e.apply_extended(map_values(g.cwiseAbs(), psi));
    Ratio best;
    for (const auto& blk : blocks) {
      const auto i = static_cast<Eigen::Index>(blk.front());
      const double den = generalized_inverse(phi, a(i), 1e-13) * generalized_inverse(psi, b(i), 1e-13);
      if (!(den >= 1e-12) || std::isinf(den)) continue;
      const double r = num(i) / den;
      if (r > best.value) best = {r, blk.front()};
    }
    return best;
  };

  GchEstimate est;
  detail::Rng rng(seed);
  MeasurableFn best_f = MeasurableFn::Zero(static_cast<Eigen::Index>(n));
  MeasurableFn best_g = best_f;
  for (int s = 0; s < samples; ++s) {
    const MeasurableFn f = detail::random_function(n, rng);
    const MeasurableFn g = detail::random_function(n, rng);
    const Ratio r = ratio(f, g);
    ++est.pairs_evaluated;
    if (r.value > est.constant) {
      est.constant = r.value;
      est.atom = r.atom;
      best_f = f;
      best_g = g;
    }
  }

  if (est.constant > 0.0) {
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::VectorXd x(2 * ni);
    x << best_f, best_g;
    auto objective = [&](const Eigen::VectorXd& v) {
      ++est.pairs_evaluated;
      return ratio(v.head(ni), v.tail(ni)).value;
    };
    const double refined = detail::coordinate_ascent(x, objective, 0.5, 1e-4);
    if (refined > est.constant) {
      best_f = x.head(ni);
      best_g = x.tail(ni);
      const Ratio r = ratio(best_f, best_g);
      est.constant = r.value;
      est.atom = r.atom;
    }
  }
  est.f = best_f;
  est.g = best_g;
  return est;
}

}  // namespace owct
