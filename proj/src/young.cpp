#include "owct/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace owct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double exp_type_value(double x) {
  // e^x - 1 - x loses all digits to cancellation near 0.
  if (x < 1e-3) {
    const double x2 = x * x;
    return x2 / 2.0 + x2 * x / 6.0 + x2 * x2 / 24.0 + x2 * x2 * x / 120.0;
  }
  return std::expm1(x) - x;
}

double require_exponent(const std::vector<double>& params, const char* kind) {
  if (params.size() != 1)
    throw std::invalid_argument(std::string(kind) + " expects exactly one parameter p");
  const double p = params[0];
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument(std::string(kind) + " requires p > 1");
  return p;
}

}  // namespace

std::string to_string(YoungKind kind) {
  switch (kind) {
    case YoungKind::power_scaled: return "power_scaled";
    case YoungKind::power_plain: return "power_plain";
    case YoungKind::exp_type: return "exp_type";
    case YoungKind::deadzone: return "deadzone";
    case YoungKind::capped: return "capped";
    case YoungKind::numeric_conjugate: return "numeric_conjugate";
  }
  return "unknown";
}

YoungKind young_kind_from_string(const std::string& name) {
  for (auto k : {YoungKind::power_scaled, YoungKind::power_plain, YoungKind::exp_type,
                 YoungKind::deadzone, YoungKind::capped, YoungKind::numeric_conjugate}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown Young function kind '" + name + "'");
}

YoungFunction::YoungFunction(YoungKind kind, std::vector<double> params, double a_phi, double b_phi)
    : kind_(kind), params_(std::move(params)), a_phi_(a_phi), b_phi_(b_phi) {}

YoungFunction YoungFunction::power_scaled(double p) {
  require_exponent({p}, "power_scaled");
  YoungFunction phi(YoungKind::power_scaled, {p}, 0.0, kInf);
  phi.audit();
  return phi;
}

YoungFunction YoungFunction::power_plain(double p) {
  require_exponent({p}, "power_plain");
  YoungFunction phi(YoungKind::power_plain, {p}, 0.0, kInf);
  phi.audit();
  return phi;
}

YoungFunction YoungFunction::exp_type() {
  YoungFunction phi(YoungKind::exp_type, {}, 0.0, kInf);
  phi.audit();
  return phi;
}

YoungFunction YoungFunction::deadzone() {
  YoungFunction phi(YoungKind::deadzone, {}, 1.0, kInf);
  phi.audit();
  return phi;
}

YoungFunction YoungFunction::capped() {
  YoungFunction phi(YoungKind::capped, {}, 0.0, 1.0);
  phi.audit();
  return phi;
}

YoungFunction YoungFunction::numeric_conjugate(const YoungFunction& base, double grid_max,
                                               int grid_n) {
  if (!(grid_max > 0.0) || grid_n <= 0)
    throw std::invalid_argument("conjugate grid parameters must be positive");
  if (grid_n < 100) throw std::invalid_argument("conjugate grid needs at least 100 points");

  // a_psi is the right derivative of the base at 0.
  const double scale = std::min(1.0, base.b_phi());
  const double e1 = 1e-12 * scale;
  const double e2 = 1e-15 * scale;
  const double s1 = base(e1) / e1;
  const double s2 = base(e2) / e2;
  const double a_psi = (s2 == 0.0 || s2 < 0.5 * s1) ? 0.0 : s2;

  // b_psi is the slope of the base at infinity; finite only for linear growth.
  double b_psi = kInf;
  if (!std::isfinite(base.b_phi())) {
    const double g = grid_max;
    const double f1 = base(g), f2 = base(g / 2.0), f3 = base(g / 4.0);
    if (std::isfinite(f1)) {
      const double t1 = (f1 - f2) / (g / 2.0);
      const double t2 = (f2 - f3) / (g / 4.0);
      if (std::abs(t1 - t2) <= 1e-9 * std::max(1.0, std::abs(t1))) b_psi = t1;
    }
  }

  YoungFunction psi(YoungKind::numeric_conjugate, {}, a_psi, b_psi);
  psi.base_ = std::make_shared<const YoungFunction>(base);
  psi.grid_max_ = grid_max;
  psi.grid_n_ = grid_n;
  psi.audit();
  return psi;
}

YoungFunction YoungFunction::from_spec(const std::string& kind, const std::vector<double>& params) {
  switch (young_kind_from_string(kind)) {
    case YoungKind::power_scaled: return power_scaled(require_exponent(params, "power_scaled"));
    case YoungKind::power_plain: return power_plain(require_exponent(params, "power_plain"));
    case YoungKind::exp_type: return exp_type();
    case YoungKind::deadzone: return deadzone();
    case YoungKind::capped: return capped();
    case YoungKind::numeric_conjugate: break;
  }
  throw std::invalid_argument("numeric_conjugate cannot be built from a kind name; use complementary()");
}

double YoungFunction::operator()(double x) const {
  const double ax = std::abs(x);
  if (ax > b_phi_) return kInf;
  switch (kind_) {
    case YoungKind::power_scaled: return std::pow(ax, params_[0]) / params_[0];
    case YoungKind::power_plain: return std::pow(ax, params_[0]);
    case YoungKind::exp_type: return exp_type_value(ax);
    case YoungKind::deadzone: return std::max(0.0, ax - 1.0);
    case YoungKind::capped: return ax * ax;
    case YoungKind::numeric_conjugate: return conjugate_value(*base_, ax, grid_max_, grid_n_);
  }
  return kInf;
}

bool YoungFunction::is_strict_n_function() const {
  return a_phi_ == 0.0 && std::isinf(b_phi_) &&
         (kind_ == YoungKind::power_scaled || kind_ == YoungKind::power_plain ||
          kind_ == YoungKind::exp_type);
}

std::string YoungFunction::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (!params_.empty()) os << "(p=" << params_[0] << ")";
  if (base_) os << "[" << base_->describe() << "]";
  return os.str();
}

void YoungFunction::audit() const {
  auto fail = [&](const std::string& what) {
    throw std::logic_error("Young function audit failed for " + describe() + ": " + what);
  };
  const YoungFunction& phi = *this;
  if (phi(0.0) != 0.0) fail("Phi(0) != 0");

  // e^x overflows past 709, so infinite-domain kinds are audited on [1e-6, 500].
  const double hi = std::isfinite(b_phi_) ? b_phi_ : 500.0;
  GridSpec grid{std::min(1e-6, hi / 2.0), hi, 64, true};
  const auto xs = grid.points();
  std::vector<double> vals;
  vals.reserve(xs.size());
  for (double x : xs) {
    const double v = phi(x);
    if (phi(-x) != v) fail("not even at x=" + std::to_string(x));
    if (!std::isfinite(v)) fail("infinite below b_phi at x=" + std::to_string(x));
    vals.push_back(v);
  }
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    if (vals[k + 1] < vals[k] - 1e-12 * std::abs(vals[k]))
      fail("decreasing near x=" + std::to_string(xs[k]));
  }
  for (std::size_t k = 0; k + 2 < xs.size(); ++k) {
    const double s0 = (vals[k + 1] - vals[k]) / (xs[k + 1] - xs[k]);
    const double s1 = (vals[k + 2] - vals[k + 1]) / (xs[k + 2] - xs[k + 1]);
    if (s1 < s0 - 1e-7 * std::abs(s0) - 1e-15) fail("not convex near x=" + std::to_string(xs[k]));
  }
  if (a_phi_ > 0.0) {
    if (phi(a_phi_ * (1.0 - 1e-6)) != 0.0) fail("nonzero below a_phi");
    if (!(phi(a_phi_ * (1.0 + 1e-6)) > 0.0)) fail("zero above a_phi");
  } else {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (xs[k] < hi && !(vals[k] > 0.0)) fail("vanishes at x=" + std::to_string(xs[k]));
    }
  }
  if (std::isfinite(b_phi_)) {
    const double at_b = phi(b_phi_);
    if (!std::isfinite(at_b)) fail("Phi(b_phi) is infinite");
    if (std::abs(at_b - phi(b_phi_ * (1.0 - 1e-9))) > 1e-6 * (1.0 + at_b))
      fail("not left-continuous at b_phi");
    if (std::isfinite(phi(b_phi_ * (1.0 + 1e-9)))) fail("finite beyond b_phi");
  }
}

double conjugate_value(const YoungFunction& phi, double y, double grid_max, int grid_n) {
  y = std::abs(y);
  if (y == 0.0) return 0.0;
  const double upper = std::min(phi.b_phi(), grid_max);
  auto objective = [&](double x) {
    const double v = phi(x);
    return std::isfinite(v) ? x * y - v : -kInf;
  };

  const int n = std::max(grid_n, 2);
  std::vector<double> seeds;
  seeds.reserve(static_cast<std::size_t>(n) + 1);
  seeds.push_back(0.0);
  const double x_min = upper * 1e-16;
  const double ratio = std::pow(upper / x_min, 1.0 / (n - 1));
  for (int k = 0; k < n; ++k) seeds.push_back(x_min * std::pow(ratio, k));
  seeds.back() = upper;

  std::size_t best = 0;
  double best_val = objective(0.0);
  for (std::size_t k = 1; k < seeds.size(); ++k) {
    const double v = objective(seeds[k]);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  double lo = seeds[best == 0 ? 0 : best - 1];
  double hi = seeds[std::min(best + 1, seeds.size() - 1)];
  for (int it = 0; it < 300 && hi - lo > 1e-13 * hi; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) < objective(m2))
      lo = m1;
    else
      hi = m2;
  }
  best_val = std::max({best_val, objective(lo), objective(hi), objective(0.5 * (lo + hi))});
  return std::max(best_val, 0.0);
}

YoungFunction complementary(const YoungFunction& phi, double grid_max, int grid_n) {
  if (!(grid_max > 0.0) || grid_n <= 0)
    throw std::invalid_argument("conjugate grid parameters must be positive");
  if (grid_n < 100) throw std::invalid_argument("conjugate grid needs at least 100 points");
  if (phi.kind() == YoungKind::power_scaled) {
    const double p = phi.params()[0];
    return YoungFunction::power_scaled(p / (p - 1.0));
  }
  return YoungFunction::numeric_conjugate(phi, grid_max, grid_n);
}

double generalized_inverse(const YoungFunction& phi, double y, double tol) {
  if (!(y >= 0.0)) throw std::invalid_argument("generalized inverse needs y >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("generalized inverse needs tol > 0");
  if (std::isinf(y)) return kInf;
  // Invariant: phi(lo) <= y < phi(hi).
  double lo = 0.0;
  double hi = 1.0;
  while (!(phi(hi) > y)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) return kInf;
  }
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (phi(mid) > y)
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

std::string to_string(GrowthKind kind) {
  switch (kind) {
    case GrowthKind::delta2: return "delta2";
    case GrowthKind::delta_prime: return "delta_prime";
    case GrowthKind::nabla_prime: return "nabla_prime";
    case GrowthKind::young_ineq: return "young_ineq";
    case GrowthKind::inverse_product: return "inverse_product";
  }
  return "unknown";
}

std::vector<double> GridSpec::points() const {
  if (n <= 0) return {};
  if (n == 1) return {lo};
  std::vector<double> pts(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    pts[static_cast<std::size_t>(k)] =
        log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  pts.back() = hi;
  return pts;
}

GrowthReport check_growth_condition(GrowthKind kind, const YoungFunction& phi,
                                    const YoungFunction* psi, double x0, const GridSpec& grid) {
  if ((kind == GrowthKind::young_ineq || kind == GrowthKind::inverse_product) && psi == nullptr)
    throw std::invalid_argument(to_string(kind) + " requires the complementary function");

  GrowthReport rep;
  rep.kind = kind;
  rep.grid = grid;
  std::vector<double> xs;
  for (double x : grid.points()) {
    if (x >= x0) xs.push_back(x);
  }

  auto record_violation = [&](double x, double y) {
    if (!rep.counterexample) rep.counterexample = std::make_pair(x, y);
    rep.holds_on_grid = false;
  };

  switch (kind) {
    case GrowthKind::delta2: {
      double k_max = 0.0;
      for (double x : xs) {
        const double num = phi(2.0 * x), den = phi(x);
        ++rep.points_checked;
        if (num == 0.0 || (std::isinf(num) && std::isinf(den))) continue;
        const double r = (den == 0.0 || std::isinf(num)) ? kInf : num / den;
        if (std::isinf(r)) record_violation(x, 0.0);
        k_max = std::max(k_max, r);
      }
      rep.witness_constant = k_max;
      break;
    }
    case GrowthKind::delta_prime: {
      double c_max = 0.0;
      for (double x : xs) {
        for (double y : xs) {
          const double num = phi(x * y), den = phi(x) * phi(y);
          ++rep.points_checked;
          if (num == 0.0 || (std::isinf(num) && std::isinf(den))) continue;
          const double r = (den == 0.0 || std::isinf(num)) ? kInf : num / den;
          if (std::isinf(r)) record_violation(x, y);
          c_max = std::max(c_max, r);
        }
      }
      rep.witness_constant = c_max;
      break;
    }
    case GrowthKind::nabla_prime: {
      double b_max = 0.0;
      for (double x : xs) {
        for (double y : xs) {
          const double target = phi(x) * phi(y);
          ++rep.points_checked;
          if (target == 0.0) continue;
          const double t = std::isinf(target) ? kInf : generalized_inverse(phi, target, 1e-12 * x * y);
          const double b = t / (x * y);
          if (std::isinf(b)) record_violation(x, y);
          b_max = std::max(b_max, b);
        }
      }
      rep.witness_constant = b_max;
      break;
    }
    case GrowthKind::young_ineq: {
      std::vector<double> psi_vals;
      psi_vals.reserve(xs.size());
      for (double y : xs) psi_vals.push_back((*psi)(y));
      double slack_max = -kInf;
      for (double x : xs) {
        const double px = phi(x);
        for (std::size_t j = 0; j < xs.size(); ++j) {
          const double y = xs[j];
          const double rhs = px + psi_vals[j];
          ++rep.points_checked;
          if (std::isinf(rhs)) continue;
          const double slack = x * y - rhs;
          slack_max = std::max(slack_max, slack);
          if (slack > 1e-12 * (x * y + rhs)) record_violation(x, y);
        }
      }
      rep.witness_constant = slack_max;
      break;
    }
    case GrowthKind::inverse_product: {
      double ratio_max = 0.0;
      for (double x : xs) {
        ++rep.points_checked;
        const double tol = std::max(1e-6 * x * std::min(1.0, x), 1e-300);
        const double prod = generalized_inverse(phi, x, tol) * generalized_inverse(*psi, x, tol);
        const double r = prod / x;
        ratio_max = std::max(ratio_max, r);
        if (!(prod > x) || prod > 2.0 * x * (1.0 + 1e-12)) record_violation(x, 0.0);
      }
      rep.witness_constant = ratio_max;
      break;
    }
  }
  return rep;
}

}  // namespace owct
