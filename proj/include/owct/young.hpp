#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace owct {

enum class YoungKind { power_scaled, power_plain, exp_type, deadzone, capped, numeric_conjugate };

std::string to_string(YoungKind kind);
YoungKind young_kind_from_string(const std::string& name);

inline constexpr double kDefaultConjugateGridMax = 1e12;
inline constexpr int kDefaultConjugateGridN = 400;

/// An even convex function Phi with Phi(0) = 0, possibly taking +inf beyond
/// b_phi. Instances are immutable; copies share any numeric-conjugate base.
///
/// Catalog:
///   power_scaled p   |x|^p / p           (p > 1)
///   power_plain p    |x|^p               (p > 1)
///   exp_type         e^|x| - |x| - 1
///   deadzone         max(0, |x| - 1)     a_phi = 1
///   capped           x^2 on [-1,1], +inf beyond   b_phi = 1
///   numeric_conjugate  sup_x { x|y| - base(x) } evaluated by search
///
/// Every constructor runs a grid audit of evenness, monotonicity, convexity
/// and the a_phi/b_phi values, and throws std::logic_error on failure.
class YoungFunction {
public:
  static YoungFunction power_scaled(double p);
  static YoungFunction power_plain(double p);
  static YoungFunction exp_type();
  static YoungFunction deadzone();
  static YoungFunction capped();
  static YoungFunction numeric_conjugate(const YoungFunction& base, double grid_max, int grid_n);

  /// Catalog lookup by name; params holds the exponent for power kinds.
  static YoungFunction from_spec(const std::string& kind, const std::vector<double>& params);

  /// Phi(|x|), +inf beyond b_phi.
  double operator()(double x) const;

  YoungKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double a_phi() const { return a_phi_; }
  double b_phi() const { return b_phi_; }
  /// Base function of a numeric conjugate, null otherwise.
  const YoungFunction* base() const { return base_.get(); }
  double grid_max() const { return grid_max_; }
  int grid_n() const { return grid_n_; }

  /// Vanishes only at 0, finite everywhere, strictly increasing.
  bool is_strict_n_function() const;
  std::string describe() const;

private:
  YoungFunction(YoungKind kind, std::vector<double> params, double a_phi, double b_phi);
  void audit() const;

  YoungKind kind_;
  std::vector<double> params_;
  double a_phi_;
  double b_phi_;
  std::shared_ptr<const YoungFunction> base_;
  double grid_max_ = 0.0;
  int grid_n_ = 0;
};

inline double eval(const YoungFunction& phi, double x) { return phi(x); }

/// sup { x|y| - phi(x) : 0 <= x <= min(b_phi, grid_max) }. Log-spaced seeds
/// bracket the maximizer; a ternary search on the concave objective refines it.
double conjugate_value(const YoungFunction& phi, double y, double grid_max = kDefaultConjugateGridMax,
                       int grid_n = kDefaultConjugateGridN);

/// Complementary function. Closed form for power_scaled (p -> p/(p-1)),
/// numeric conjugate otherwise. Throws std::invalid_argument when
/// grid_max <= 0 or grid_n < 100.
YoungFunction complementary(const YoungFunction& phi, double grid_max = kDefaultConjugateGridMax,
                            int grid_n = kDefaultConjugateGridN);

/// inf { x >= 0 : phi(x) > y } by bisection to absolute tolerance tol. The
/// returned value is the lower end of the final bracket, so
/// phi(result) <= y always holds. +inf when phi never exceeds y below 1e15.
double generalized_inverse(const YoungFunction& phi, double y, double tol = 1e-10);

enum class GrowthKind { delta2, delta_prime, nabla_prime, young_ineq, inverse_product };

std::string to_string(GrowthKind kind);

struct GridSpec {
  double lo = 1e-3;
  double hi = 1e3;
  int n = 61;
  bool log_spaced = true;

  std::vector<double> points() const;
};

/// Grid-certified growth diagnostics. Nothing here is an asymptotic proof:
/// the report states what held on the sampled points.
struct GrowthReport {
  GrowthKind kind;
  bool holds_on_grid = true;
  /// K for delta2, c for delta_prime, b for nabla_prime, max slack
  /// xy - Phi(x) - Psi(y) for young_ineq, max Phi^-1(x)Psi^-1(x)/x for
  /// inverse_product.
  std::optional<double> witness_constant;
  /// (x, y) of the first violation; y is unused for one-variable checks.
  std::optional<std::pair<double, double>> counterexample;
  GridSpec grid;
  std::size_t points_checked = 0;
};

/// Throws std::invalid_argument when psi is required (young_ineq,
/// inverse_product) but missing.
GrowthReport check_growth_condition(GrowthKind kind, const YoungFunction& phi,
                                    const YoungFunction* psi, double x0, const GridSpec& grid);

}  // namespace owct
