#include "owct/orlicz.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace owct {

double modular(const OrliczContext& ctx, const MeasurableFn& f) {
  if (static_cast<std::size_t>(f.size()) != ctx.space.size())
    throw std::invalid_argument("function length does not match atom count");
  double total = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double v = ctx.phi(f(i));
    if (std::isinf(v)) return std::numeric_limits<double>::infinity();
    total += v * ctx.space.weights()(i);
  }
  return total;
}

double luxemburg_norm(const OrliczContext& ctx, const MeasurableFn& f, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("norm tolerance must be positive");
  if (!f.allFinite()) return std::numeric_limits<double>::infinity();
  const double s = ess_sup(f);
  if (s == 0.0) return 0.0;

  auto above_one = [&](double k) { return !(modular(ctx, f / k) <= 1.0); };

  // {k : I(f/k) <= 1} is a ray [k*, inf); bracket it with lo outside, hi inside.
  double hi = s;
  while (above_one(hi)) hi *= 2.0;
  double lo = 1e-15 * s;
  while (!above_one(lo)) {
    lo *= 1e-3;
    if (lo < std::numeric_limits<double>::min()) return hi;
  }
  while (hi - lo > tol * hi) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (above_one(mid))
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

bool in_orlicz_space(const OrliczContext& ctx, const MeasurableFn& f) {
  if (static_cast<std::size_t>(f.size()) != ctx.space.size())
    throw std::invalid_argument("function length does not match atom count");
  return f.allFinite();
}

}  // namespace owct
