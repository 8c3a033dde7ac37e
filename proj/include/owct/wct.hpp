#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "owct/condexp.hpp"
#include "owct/orlicz.hpp"

namespace owct {

using OperatorMatrix = Eigen::MatrixXd;

enum class Mode { direct, closed_form };

/// T = M_w E M_u, f -> w E(u f). The symbol h = E(uw) is computed once.
class WctOperator {
public:
  WctOperator(MeasurableFn u, MeasurableFn w, CondExp e);

  const MeasurableFn& u() const { return u_; }
  const MeasurableFn& w() const { return w_; }
  const MeasurableFn& h() const { return h_; }
  const CondExp& cond_exp() const { return e_; }
  const FiniteMeasureSpace& space() const { return e_.space(); }
  std::size_t size() const { return e_.size(); }

  MeasurableFn apply(const MeasurableFn& f) const;
  /// Column j is the image of the indicator of atom j.
  OperatorMatrix matrix() const;
  /// M_u E M_w, the operator with u and w exchanged.
  WctOperator swapped() const { return WctOperator(w_, u_, e_); }

private:
  MeasurableFn u_;
  MeasurableFn w_;
  CondExp e_;
  MeasurableFn h_;
};

inline OperatorMatrix matrix_of(const WctOperator& t) { return t.matrix(); }

/// T^n. closed_form: f -> h^(n-1) w E(u f).
OperatorMatrix iterate(const WctOperator& t, int n, Mode mode);

/// v_n = sum_{i=0}^{n-2} h^i.
MeasurableFn cesaro_weight(const MeasurableFn& h, int n);
/// w_n = sum_{i=1}^{n-2} (n-i-1) h^(i-1).
MeasurableFn b_n_weight(const MeasurableFn& h, int n);

/// A_n = (I + T + ... + T^(n-1)) / n; closed form (I + M_{v_n} T) / n.
OperatorMatrix cesaro_mean(const WctOperator& t, int n, Mode mode);
/// B_n = (T^(n-2) + 2T^(n-3) + ... + (n-1)I) / n; closed form (M_{w_n} T + (n-1)I) / n.
OperatorMatrix b_n_operator(const WctOperator& t, int n, Mode mode);

/// lim B_n = I + M_{1/(1-h)} T = (I - T)^-1; requires h != 1 on every atom.
OperatorMatrix b_n_limit(const WctOperator& t);
/// lim A_n = M_{1(h = 1)} T, valid when ||h||_inf <= 1.
OperatorMatrix cesaro_limit(const WctOperator& t);

/// Max-entry residuals of the three Cesaro identities at n, each divided
/// by 1 + the larger max-entry norm of its two sides:
///   T^n/n = (n+1)/n A_{n+1} - A_n,  (I-T)A_n = (I-T^n)/n,  I-A_n = (I-T)B_n.
struct CesaroResiduals {
  double powers = 0.0;
  double telescoping = 0.0;
  double b_n_factor = 0.0;
  double a_closed_form = 0.0;
  double b_closed_form = 0.0;
  double max() const;
};
CesaroResiduals cesaro_residuals(const WctOperator& t, int n);

/// Adjoint for <f, g> = sum f_i g_i mu_i: D^-1 A^T D with D = diag(mu).
OperatorMatrix pairing_adjoint(const OperatorMatrix& a, const FiniteMeasureSpace& space);

/// M = ess_sup(w Psi^-1(E(Psi(|u|)))).
double bound_multiplier(const WctOperator& t, const YoungFunction& psi);
/// C * M, the boundedness constant for a GCH constant C.
double bound_constant(const WctOperator& t, const YoungFunction& phi, const YoungFunction& psi,
                      double c_gch);

/// S(Phi^-1(E(Phi(|w|)))) intersected with S(Psi^-1(E(Psi(|u|)))).
IndexSet power_criterion_support(const WctOperator& t, const YoungFunction& phi,
                                 const YoungFunction& psi);

/// Lower bound for the L^Phi operator norm: max of N(Af)/N(f) over random
/// samples, atom indicators and the weighted-l2 top singular vector, then
/// coordinate ascent from the best of them.
double norm_estimate(const OperatorMatrix& a, const OrliczContext& ctx, int samples,
                     std::uint64_t seed);

/// Exact operator norm on weighted l2, i.e. for Phi = x^2.
double weighted_l2_norm(const OperatorMatrix& a, const FiniteMeasureSpace& space);

struct PowerBoundedReport {
  /// |h_i| < 1 on the criterion support.
  bool criterion_holds = false;
  IndexSet criterion_support;
  double h_sup = 0.0;
  /// Estimated ||T^n|| for n = 1..n_max.
  std::vector<double> norms;
  double sup_norm_estimate = 0.0;
  int sup_attained_at = 1;
  /// ||h^n||_inf for n = 1..n_max.
  std::vector<double> h_power_norms;
  bool h_powers_bounded = false;
  /// ||T^n_max|| exceeds ||T|| beyond noise.
  bool growth_detected = false;
};

/// Estimates ||T^n|| from the closed-form iterates for n <= n_max.
PowerBoundedReport power_bounded_report(const WctOperator& t, const YoungFunction& phi,
                                        const YoungFunction& psi, int n_max, int samples = 16,
                                        std::uint64_t seed = 0);

}  // namespace owct
