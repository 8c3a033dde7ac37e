#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace owct::detail {

/// Derivative-free coordinate ascent. Each level tries x_i +/- step*scale
/// for every coordinate until a full sweep gives no improvement, then
/// shrinks the step by `shrink`. scale is max(1, |x|_inf) at level start.
template <class Objective>
double coordinate_ascent(Eigen::VectorXd& x, Objective&& objective, double step0,
                         double step_min, double shrink = 0.1, int max_sweeps = 8) {
  double best = objective(x);
  for (double step = step0; step >= step_min; step *= shrink) {
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      bool improved = false;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (double dir : {1.0, -1.0}) {
          const double saved = x(i);
          x(i) = saved + dir * step * scale;
          const double v = objective(x);
          if (v > best) {
            best = v;
            improved = true;
            break;
          }
          x(i) = saved;
        }
      }
      if (!improved) break;
    }
  }
  return best;
}

}  // namespace owct::detail
