#include "owct/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "owct/detail/random.hpp"

namespace owct {

namespace {

using Eigen::MatrixXd;

double spectral_norm(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  return svd.singularValues()(0);
}

void require_same_ambient(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("subspace dimension mismatch");
}

/// Component of b orthogonal to span(a); its singular values are the sines
/// of the principal angles between b and a.
Eigen::JacobiSVD<MatrixXd> residual_svd(const SubspaceBasis& a, const SubspaceBasis& b) {
  MatrixXd r = b.vectors;
  if (a.dim() > 0) r -= a.vectors * (a.vectors.transpose() * b.vectors);
  return Eigen::JacobiSVD<MatrixXd>(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

std::size_t count_above(const Eigen::VectorXd& s, double tau) {
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tau) ++k;
  return k;
}

std::string dims_string(const std::vector<std::size_t>& dims) {
  std::ostringstream os;
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  return os.str();
}

}  // namespace

SubspaceBasis SubspaceBasis::zero(std::size_t n, double tol) {
  return {MatrixXd(static_cast<Eigen::Index>(n), 0), tol};
}

SubspaceBasis SubspaceBasis::full(std::size_t n, double tol) {
  const auto sz = static_cast<Eigen::Index>(n);
  return {MatrixXd::Identity(sz, sz), tol};
}

RankInfo rank_info(const MatrixXd& m, double tol, double abs_floor) {
  if (!(tol > 0.0)) throw std::invalid_argument("rank tolerance must be > 0");
  RankInfo info;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  info.singular_values = svd.singularValues();
  const double smax = info.singular_values.size() ? info.singular_values(0) : 0.0;
  info.threshold = std::max(smax > 0.0 ? tol * smax : tol, abs_floor);
  info.rank = count_above(info.singular_values, info.threshold);
  for (Eigen::Index i = 0; i < info.singular_values.size(); ++i) {
    const double s = info.singular_values(i);
    if (s >= 0.9 * info.threshold && s <= 1.1 * info.threshold) info.ill_conditioned = true;
  }
  return info;
}

SubspaceBasis null_space(const MatrixXd& m, double tol, double abs_floor) {
  const RankInfo info = rank_info(m, tol, abs_floor);
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto r = static_cast<Eigen::Index>(info.rank);
  return {svd.matrixV().rightCols(m.cols() - r), tol};
}

SubspaceBasis range_space(const MatrixXd& m, double tol, double abs_floor) {
  const RankInfo info = rank_info(m, tol, abs_floor);
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullU);
  return {svd.matrixU().leftCols(static_cast<Eigen::Index>(info.rank)), tol};
}

std::size_t PowerChain::null_dim(std::size_t k) const {
  return static_cast<std::size_t>(powers[k].cols()) - ranks[k].rank;
}

SubspaceBasis PowerChain::null_space(std::size_t k) const {
  return owct::null_space(powers[k], tol, ranks[k].threshold);
}

SubspaceBasis PowerChain::range_space(std::size_t k) const {
  return owct::range_space(powers[k], tol, ranks[k].threshold);
}

bool PowerChain::ill_conditioned() const {
  return std::any_of(ranks.begin(), ranks.end(), [](const RankInfo& r) { return r.ill_conditioned; });
}

PowerChain power_chain(const MatrixXd& m, int k_max, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("power chain needs a square matrix");
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  PowerChain chain;
  chain.tol = tol;
  const MatrixXd abs_m = m.cwiseAbs();
  MatrixXd p = MatrixXd::Identity(m.rows(), m.cols());
  MatrixXd q = p;
  chain.powers.push_back(p);
  chain.ranks.push_back(rank_info(p, tol));
  for (int k = 1; k <= k_max; ++k) {
    p = m * p;
    q = abs_m * q;
    chain.powers.push_back(p);
    chain.ranks.push_back(rank_info(p, tol, k == 1 ? 0.0 : 1e-12 * spectral_norm(q)));
  }
  return chain;
}

std::optional<int> ascent_of(const PowerChain& chain) {
  for (std::size_t k = 0; k + 1 < chain.powers.size(); ++k)
    if (chain.null_dim(k) == chain.null_dim(k + 1)) return static_cast<int>(k);
  return std::nullopt;
}

std::optional<int> descent_of(const PowerChain& chain) {
  for (std::size_t k = 0; k + 1 < chain.powers.size(); ++k)
    if (chain.range_dim(k) == chain.range_dim(k + 1)) return static_cast<int>(k);
  return std::nullopt;
}

std::optional<int> ascent_of(const MatrixXd& m, int k_max, double tol) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  return ascent_of(power_chain(m, k_max + 1, tol));
}

std::optional<int> descent_of(const MatrixXd& m, int k_max, double tol) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  return descent_of(power_chain(m, k_max + 1, tol));
}

SubspaceBasis subspace_sum(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_ambient(a, b);
  const double tau = std::max(a.tol, b.tol);
  if (b.dim() == 0) return {a.vectors, tau};
  const auto svd = residual_svd(a, b);
  const auto extra = static_cast<Eigen::Index>(count_above(svd.singularValues(), tau));
  MatrixXd out(static_cast<Eigen::Index>(a.ambient()), static_cast<Eigen::Index>(a.dim()) + extra);
  out << a.vectors, svd.matrixU().leftCols(extra);
  return {out, tau};
}

SubspaceBasis subspace_intersection(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_ambient(a, b);
  const double tau = std::max(a.tol, b.tol);
  if (a.dim() == 0 || b.dim() == 0) return SubspaceBasis::zero(a.ambient(), tau);
  const auto svd = residual_svd(a, b);
  // Right singular directions with sine <= tau (including the implicit zero
  // singular values when dim b exceeds the ambient dimension) lie in a.
  const auto k = static_cast<Eigen::Index>(count_above(svd.singularValues(), tau));
  return {b.vectors * svd.matrixV().rightCols(static_cast<Eigen::Index>(b.dim()) - k), tau};
}

StructureReport verify_structure_theorems(const WctOperator& t, const OrliczContext& ctx,
                                          double tol, const StructureOptions& opts) {
  const std::size_t n = t.size();
  const auto sz = static_cast<Eigen::Index>(n);
  const MatrixXd m = t.matrix();
  const MatrixXd id = MatrixXd::Identity(sz, sz);
  const PowerChain chain = power_chain(m, std::max(opts.k_max + 1, 6), tol);

  StructureReport rep;
  rep.ascent = ascent_of(chain);
  rep.descent = descent_of(chain);
  rep.ill_conditioned = chain.ill_conditioned();

  std::vector<std::size_t> null_dims, range_dims;
  for (std::size_t k = 0; k < chain.powers.size(); ++k) {
    null_dims.push_back(chain.null_dim(k));
    range_dims.push_back(chain.range_dim(k));
  }

  // (a) ascent bound and stabilization of the kernel chain
  {
    ClaimResult c = make_claim("structure.ascent_bound", "ascent(T) <= 2; N(T^2) = N(T^(2+n))");
    c.passed = rep.ascent.has_value() && *rep.ascent <= 2;
    for (std::size_t k = 3; k <= 6; ++k)
      if (null_dims[k] != null_dims[2]) c.passed = false;
    c.residual = rep.ascent ? *rep.ascent : -1;
    c.detail = "null dims " + dims_string(null_dims);
    rep.claims.push_back(c);
  }

  // hypothesis of the descent claims: |h| >= delta on S(h)
  const IndexSet s_h = support(t.h());
  double h_min = std::numeric_limits<double>::infinity();
  for (std::size_t i : s_h) h_min = std::min(h_min, std::abs(t.h()(static_cast<Eigen::Index>(i))));
  const bool h_away = h_min >= opts.delta;
  const Hypothesis h_away_hyp = h_away ? Hypothesis::met : Hypothesis::not_met;

  {
    ClaimResult c = make_claim("structure.descent_bound", "h bounded away from 0 => descent(T) <= 2; R(T^(n+2)) = R(T^2)");
    c.hypothesis = h_away_hyp;
    c.passed = rep.descent.has_value() && *rep.descent <= 2;
    for (std::size_t k = 3; k <= 6; ++k)
      if (range_dims[k] != range_dims[2]) c.passed = false;
    c.residual = rep.descent ? *rep.descent : -1;
    c.detail = "range dims " + dims_string(range_dims) + "; delta=" + std::to_string(opts.delta) +
               (s_h.empty() ? " (S(h) empty, vacuous)" : "");
    rep.claims.push_back(c);
  }

  const SubspaceBasis r2 = chain.range_space(2);
  const SubspaceBasis n2 = chain.null_space(2);
  {
    ClaimResult c = make_claim("structure.range_null_intersection", "R(T^2) ∩ N(T^m) = {0}");
    for (std::size_t k = 1; k <= 4; ++k) {
      const std::size_t d = subspace_intersection(r2, chain.null_space(k)).dim();
      c.residual = std::max(c.residual, static_cast<double>(d));
      if (d != 0) {
        c.passed = false;
        c.detail = "m=" + std::to_string(k) + " dim " + std::to_string(d);
      }
    }
    rep.claims.push_back(c);
  }
  {
    ClaimResult c = make_claim("structure.range_null_sum", "h bounded away from 0 => R(T^n) + N(T^2) = whole space");
    c.hypothesis = h_away_hyp;
    for (std::size_t k = 1; k <= 4; ++k) {
      const std::size_t d = subspace_sum(chain.range_space(k), n2).dim();
      c.residual = std::max(c.residual, static_cast<double>(n - d));
      if (d != n) {
        c.passed = false;
        c.detail = "n=" + std::to_string(k) + " dim " + std::to_string(d);
      }
    }
    rep.claims.push_back(c);
  }
  {
    ClaimResult c = make_claim("structure.symbol_decomposition", "R(M_h T) + N(M_h T) = whole space");
    const MatrixXd mh = t.h().asDiagonal() * m;
    // M_h T = T^2, so it carries the roundoff of |T|^2.
    const double floor = 1e-12 * spectral_norm(m.cwiseAbs() * m.cwiseAbs());
    const std::size_t d =
        subspace_sum(range_space(mh, tol, floor), null_space(mh, tol, floor)).dim();
    c.passed = d == n;
    c.residual = static_cast<double>(n - d);
    c.detail = "sum dim " + std::to_string(d) + " of " + std::to_string(n);
    rep.claims.push_back(c);
  }
  {
    ClaimResult c = make_claim("structure.dense_sum", "R(T^2) + N(T^2) dense (equal in finite dimensions), R(T^2) ∩ N(T^2) = {0}");
    const std::size_t ds = subspace_sum(r2, n2).dim();
    const std::size_t di = subspace_intersection(r2, n2).dim();
    c.passed = ds == n && di == 0;
    c.residual = static_cast<double>(n - ds + di);
    c.detail = "sum dim " + std::to_string(ds) + ", intersection dim " + std::to_string(di) +
               "; density => equality in finite dimensions";
    rep.claims.push_back(c);
  }

  // claims conditioned on |h| < 1 over the power-boundedness support
  std::optional<YoungFunction> psi_owned;
  if (!opts.psi) psi_owned = complementary(ctx.phi);
  const YoungFunction& psi = opts.psi ? *opts.psi : *psi_owned;
  const IndexSet crit_support = power_criterion_support(t, ctx.phi, psi);
  bool criterion = true;
  for (std::size_t i : crit_support)
    if (!(std::abs(t.h()(static_cast<Eigen::Index>(i))) < 1.0)) criterion = false;
  const Hypothesis crit_hyp = criterion ? Hypothesis::met : Hypothesis::not_met;
  const std::string crit_note = criterion ? "" : "|h| >= 1 on the criterion support";

  const MatrixXd i_minus_t = id - m;
  {
    ClaimResult c = make_claim("structure.ascent_i_minus_t", "|h| < 1 on the criterion support => ascent(I - T) <= 1");
    c.hypothesis = crit_hyp;
    const auto a1 = ascent_of(power_chain(i_minus_t, 3, tol));
    const auto a2 = ascent_of(power_chain(pairing_adjoint(i_minus_t, t.space()), 3, tol));
    c.passed = a1 && *a1 <= 1 && a2 && *a2 <= 1;
    c.residual = std::max(a1 ? *a1 : 99, a2 ? *a2 : 99);
    c.detail = criterion ? "ascent " + std::to_string(a1 ? *a1 : -1) + ", pairing adjoint " +
                               std::to_string(a2 ? *a2 : -1)
                         : crit_note;
    rep.claims.push_back(c);
  }

  const SubspaceBasis r_imt = range_space(i_minus_t, tol);
  const SubspaceBasis n_imt = null_space(i_minus_t, tol);
  {
    ClaimResult c = make_claim("structure.direct_sum", "|h| < 1 on the criterion support => R(I - T) ⊕ N(I - T)");
    c.hypothesis = crit_hyp;
    const std::size_t ds = subspace_sum(r_imt, n_imt).dim();
    const std::size_t di = subspace_intersection(r_imt, n_imt).dim();
    c.passed = ds == n && di == 0 && r_imt.dim() + n_imt.dim() == n;
    c.residual = static_cast<double>(n - ds + di);
    c.detail = criterion ? "sum dim " + std::to_string(ds) + ", intersection dim " + std::to_string(di)
                         : crit_note;
    rep.claims.push_back(c);
  }

  {
    ClaimResult c = make_claim("structure.ergodic", "|h| < 1 on the criterion support => I - T invertible iff R(I - T) full; "
                  "B_n f -> (I - T)^-1 f; A_n f -> T-invariant limit");
    c.hypothesis = crit_hyp;
    if (!criterion) {
      c.detail = crit_note;
    } else {
      Eigen::FullPivLU<MatrixXd> lu(i_minus_t);
      lu.setThreshold(tol);
      const bool invertible = lu.isInvertible();
      const bool range_full = r_imt.is_full();
      std::ostringstream detail;
      detail << "invertible=" << invertible << " range_full=" << range_full;
      c.passed = invertible == range_full;

      const int n1 = opts.ergodic_n;
      const int n2x = 2 * n1;
      const MatrixXd a1 = cesaro_mean(t, n1, Mode::closed_form);
      const MatrixXd a2 = cesaro_mean(t, n2x, Mode::closed_form);
      const MatrixXd lim_a = cesaro_limit(t);
      MatrixXd inv, b1, b2;
      if (invertible) {
        inv = lu.inverse();
        b1 = b_n_operator(t, n1, Mode::closed_form);
        b2 = b_n_operator(t, n2x, Mode::closed_form);
        const MatrixXd lim_b = b_n_limit(t);
        const double r = (lim_b - inv).cwiseAbs().maxCoeff() / (1.0 + inv.cwiseAbs().maxCoeff());
        detail << " closed_limit_residual=" << r;
        if (r > 1e-8) c.passed = false;
      }

      detail::Rng rng(opts.seed);
      double worst_b = 0.0, worst_inv = 0.0;
      for (int s = 0; s < opts.ergodic_samples; ++s) {
        const MeasurableFn f = detail::random_function(n, rng);
        if (invertible) {
          const MeasurableFn x = inv * f;
          const double e1 = (b1 * f - x).cwiseAbs().maxCoeff();
          const double e2 = (b2 * f - x).cwiseAbs().maxCoeff();
          worst_b = std::max(worst_b, e1);
          if (!(e2 <= 0.75 * e1 || e2 <= 1e-12 * (1.0 + x.cwiseAbs().maxCoeff()))) c.passed = false;
        }
        const MeasurableFn l = lim_a * f;
        const double scale = 1.0 + l.cwiseAbs().maxCoeff();
        const double inv_res = (m * l - l).cwiseAbs().maxCoeff() / scale;
        worst_inv = std::max(worst_inv, inv_res);
        if (inv_res > opts.invariance_tol) c.passed = false;
        const double e1 = (a1 * f - l).cwiseAbs().maxCoeff();
        const double e2 = (a2 * f - l).cwiseAbs().maxCoeff();
        if (!(e2 <= 0.75 * e1 || e2 <= 1e-12 * scale)) c.passed = false;
      }
      detail << " max|B_n f - (I-T)^-1 f| at n=" << n1 << ": " << worst_b
             << " max|T L - L|/(1+|L|)=" << worst_inv;
      c.residual = worst_inv;
      c.detail = detail.str();
    }
    rep.claims.push_back(c);
  }
  return rep;
}

}  // namespace owct
