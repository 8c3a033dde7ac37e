#include "owct/wct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "owct/detail/ascent.hpp"
#include "owct/detail/random.hpp"

namespace owct {

namespace {

double max_abs(const OperatorMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double rel_residual(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  return max_abs(lhs - rhs) / (1.0 + std::max(max_abs(lhs), max_abs(rhs)));
}

MeasurableFn abs_map(const MeasurableFn& f, const YoungFunction& phi) {
  MeasurableFn out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) out(i) = phi(std::abs(f(i)));
  return out;
}

MeasurableFn inverse_map(const MeasurableFn& f, const YoungFunction& phi) {
  MeasurableFn out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) out(i) = generalized_inverse(phi, f(i), 1e-13);
  return out;
}

/// Psi^-1(E(Psi(|g|))), the factor that appears in the boundedness constant.
MeasurableFn inverse_average(const CondExp& e, const MeasurableFn& g, const YoungFunction& psi) {
  return inverse_map(e.apply_extended(abs_map(g, psi)), psi);
}

void require_positive(int n, int min_n) {
  if (n < min_n) throw std::invalid_argument("n must be >= " + std::to_string(min_n));
}

}  // namespace

WctOperator::WctOperator(MeasurableFn u, MeasurableFn w, CondExp e)
    : u_(std::move(u)), w_(std::move(w)), e_(std::move(e)) {
  if (static_cast<std::size_t>(u_.size()) != e_.size() ||
      static_cast<std::size_t>(w_.size()) != e_.size())
    throw std::invalid_argument("u and w must have one value per atom");
  if (!u_.allFinite() || !w_.allFinite()) throw std::invalid_argument("u and w must be finite");
  h_ = e_(u_.cwiseProduct(w_));
}

MeasurableFn WctOperator::apply(const MeasurableFn& f) const {
  return w_.cwiseProduct(e_(u_.cwiseProduct(f)));
}

OperatorMatrix WctOperator::matrix() const {
  // w_i * E_ij * u_j, with E_ij = mu_j / mu(block) on shared blocks.
  return w_.asDiagonal() * e_.matrix() * u_.asDiagonal();
}

OperatorMatrix iterate(const WctOperator& t, int n, Mode mode) {
  require_positive(n, 1);
  const OperatorMatrix m = t.matrix();
  if (mode == Mode::closed_form) {
    const MeasurableFn hp = t.h().array().pow(static_cast<double>(n - 1));
    return hp.asDiagonal() * m;
  }
  OperatorMatrix p = m;
  for (int k = 1; k < n; ++k) p = m * p;
  return p;
}

MeasurableFn cesaro_weight(const MeasurableFn& h, int n) {
  MeasurableFn v = MeasurableFn::Zero(h.size());
  MeasurableFn hp = MeasurableFn::Ones(h.size());
  for (int i = 0; i <= n - 2; ++i) {
    v += hp;
    hp = hp.cwiseProduct(h);
  }
  return v;
}

MeasurableFn b_n_weight(const MeasurableFn& h, int n) {
  MeasurableFn v = MeasurableFn::Zero(h.size());
  MeasurableFn hp = MeasurableFn::Ones(h.size());
  for (int i = 1; i <= n - 2; ++i) {
    v += static_cast<double>(n - i - 1) * hp;
    hp = hp.cwiseProduct(h);
  }
  return v;
}

OperatorMatrix cesaro_mean(const WctOperator& t, int n, Mode mode) {
  require_positive(n, 1);
  const auto sz = static_cast<Eigen::Index>(t.size());
  const OperatorMatrix id = OperatorMatrix::Identity(sz, sz);
  if (mode == Mode::closed_form) {
    if (n == 1) return id;
    return (id + cesaro_weight(t.h(), n).asDiagonal() * t.matrix()) / n;
  }
  const OperatorMatrix m = t.matrix();
  OperatorMatrix sum = id;
  OperatorMatrix p = id;
  for (int k = 1; k < n; ++k) {
    p = m * p;
    sum += p;
  }
  return sum / n;
}

OperatorMatrix b_n_operator(const WctOperator& t, int n, Mode mode) {
  require_positive(n, 2);
  const auto sz = static_cast<Eigen::Index>(t.size());
  const OperatorMatrix id = OperatorMatrix::Identity(sz, sz);
  if (mode == Mode::closed_form)
    return (b_n_weight(t.h(), n).asDiagonal() * t.matrix() + (n - 1.0) * id) / n;
  const OperatorMatrix m = t.matrix();
  OperatorMatrix sum = OperatorMatrix::Zero(sz, sz);
  OperatorMatrix p = id;
  for (int k = 0; k <= n - 2; ++k) {
    sum += static_cast<double>(n - 1 - k) * p;
    p = m * p;
  }
  return sum / n;
}

OperatorMatrix b_n_limit(const WctOperator& t) {
  const auto sz = static_cast<Eigen::Index>(t.size());
  MeasurableFn g(sz);
  for (Eigen::Index i = 0; i < sz; ++i) {
    const double d = 1.0 - t.h()(i);
    if (d == 0.0) throw std::domain_error("h = 1 on some atom; I - T is not invertible");
    g(i) = 1.0 / d;
  }
  return OperatorMatrix::Identity(sz, sz) + g.asDiagonal() * t.matrix();
}

OperatorMatrix cesaro_limit(const WctOperator& t) {
  if (ess_sup(t.h()) > 1.0 + 1e-12) throw std::domain_error("Cesaro limit needs ||h||_inf <= 1");
  MeasurableFn chi(t.h().size());
  for (Eigen::Index i = 0; i < chi.size(); ++i) chi(i) = std::abs(t.h()(i) - 1.0) <= 1e-12 ? 1.0 : 0.0;
  return chi.asDiagonal() * t.matrix();
}

double CesaroResiduals::max() const {
  return std::max({powers, telescoping, b_n_factor, a_closed_form, b_closed_form});
}

CesaroResiduals cesaro_residuals(const WctOperator& t, int n) {
  require_positive(n, 2);
  const auto sz = static_cast<Eigen::Index>(t.size());
  const OperatorMatrix id = OperatorMatrix::Identity(sz, sz);
  const OperatorMatrix m = t.matrix();
  const OperatorMatrix tn = iterate(t, n, Mode::direct);
  const OperatorMatrix a_n = cesaro_mean(t, n, Mode::direct);
  const OperatorMatrix a_next = cesaro_mean(t, n + 1, Mode::direct);
  const OperatorMatrix b_n = b_n_operator(t, n, Mode::direct);

  CesaroResiduals r;
  r.powers = rel_residual(tn / n, (n + 1.0) / n * a_next - a_n);
  r.telescoping = rel_residual((id - m) * a_n, (id - tn) / n);
  r.b_n_factor = rel_residual(id - a_n, (id - m) * b_n);
  r.a_closed_form = rel_residual(a_n, cesaro_mean(t, n, Mode::closed_form));
  r.b_closed_form = rel_residual(b_n, b_n_operator(t, n, Mode::closed_form));
  return r;
}

OperatorMatrix pairing_adjoint(const OperatorMatrix& a, const FiniteMeasureSpace& space) {
  const Eigen::VectorXd& mu = space.weights();
  return mu.cwiseInverse().asDiagonal() * a.transpose() * mu.asDiagonal();
}

double bound_multiplier(const WctOperator& t, const YoungFunction& psi) {
  const MeasurableFn factor = inverse_average(t.cond_exp(), t.u(), psi);
  double m = 0.0;
  for (Eigen::Index i = 0; i < factor.size(); ++i) {
    const double wi = std::abs(t.w()(i));
    if (wi == 0.0) continue;
    m = std::max(m, wi * factor(i));
  }
  return m;
}

double bound_constant(const WctOperator& t, const YoungFunction& /*phi*/, const YoungFunction& psi,
                      double c_gch) {
  if (!(c_gch > 0.0)) throw std::invalid_argument("GCH constant must be > 0");
  return c_gch * bound_multiplier(t, psi);
}

IndexSet power_criterion_support(const WctOperator& t, const YoungFunction& phi,
                                 const YoungFunction& psi) {
  const MeasurableFn a = inverse_average(t.cond_exp(), t.w(), phi);
  const MeasurableFn b = inverse_average(t.cond_exp(), t.u(), psi);
  const IndexSet sa = support(a, 1e-10);
  const IndexSet sb = support(b, 1e-10);
  IndexSet out;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
  return out;
}

double weighted_l2_norm(const OperatorMatrix& a, const FiniteMeasureSpace& space) {
  const Eigen::VectorXd s = space.weights().cwiseSqrt();
  const OperatorMatrix scaled = s.asDiagonal() * a * s.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<OperatorMatrix> svd(scaled);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double norm_estimate(const OperatorMatrix& a, const OrliczContext& ctx, int samples,
                     std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const std::size_t n = ctx.space.size();
  if (static_cast<std::size_t>(a.rows()) != n || static_cast<std::size_t>(a.cols()) != n)
    throw std::invalid_argument("matrix size does not match atom count");
  if (max_abs(a) == 0.0) return 0.0;

  auto ratio = [&](const MeasurableFn& f) {
    const double nf = luxemburg_norm(ctx, f);
    if (!(nf > 0.0) || !std::isfinite(nf)) return 0.0;
    return luxemburg_norm(ctx, a * f) / nf;
  };

  std::vector<MeasurableFn> candidates;
  for (std::size_t i = 0; i < n; ++i) candidates.push_back(indicator({i}, n));
  {
    const Eigen::VectorXd s = ctx.space.weights().cwiseSqrt();
    const OperatorMatrix scaled = s.asDiagonal() * a * s.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<OperatorMatrix> svd(scaled, Eigen::ComputeThinV);
    candidates.push_back(s.cwiseInverse().cwiseProduct(svd.matrixV().col(0)));
  }
  detail::Rng rng(seed);
  for (int k = 0; k < samples; ++k) candidates.push_back(detail::random_function(n, rng));

  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t k = 0; k < candidates.size(); ++k) scored.emplace_back(ratio(candidates[k]), k);
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

  double best = scored.front().first;
  if (best > 0.0) {
    Eigen::VectorXd x = candidates[scored.front().second];
    x /= x.cwiseAbs().maxCoeff();
    best = std::max(best, detail::coordinate_ascent(x, ratio, 0.3, 3e-6));
  }
  return best;
}

PowerBoundedReport power_bounded_report(const WctOperator& t, const YoungFunction& phi,
                                        const YoungFunction& psi, int n_max, int samples,
                                        std::uint64_t seed) {
  require_positive(n_max, 2);
  PowerBoundedReport r;
  r.criterion_support = power_criterion_support(t, phi, psi);
  r.criterion_holds = true;
  for (std::size_t i : r.criterion_support)
    if (!(std::abs(t.h()(static_cast<Eigen::Index>(i))) < 1.0)) r.criterion_holds = false;
  r.h_sup = ess_sup(t.h());

  const OrliczContext ctx{t.space(), phi};
  for (int n = 1; n <= n_max; ++n) {
    r.norms.push_back(norm_estimate(iterate(t, n, Mode::closed_form), ctx, samples, seed));
    r.h_power_norms.push_back(std::pow(r.h_sup, n));
  }
  const auto it = std::max_element(r.norms.begin(), r.norms.end());
  r.sup_norm_estimate = *it;
  r.sup_attained_at = static_cast<int>(it - r.norms.begin()) + 1;

  r.h_powers_bounded = true;
  for (int n = 1; n <= n_max; ++n)
    if (r.h_power_norms[n - 1] > 1.0 + 1e-12 * n) r.h_powers_bounded = false;
  r.growth_detected = r.norms.back() > r.norms.front() * (1.0 + 1e-6) + 1e-12;
  return r;
}

}  // namespace owct
