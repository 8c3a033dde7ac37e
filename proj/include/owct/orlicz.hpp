#pragma once

#include "owct/measure.hpp"
#include "owct/young.hpp"

namespace owct {

/// L^Phi(mu) over a finite atomic space.
struct OrliczContext {
  FiniteMeasureSpace space;
  YoungFunction phi;
};

/// I_Phi(f) = sum_i Phi(f_i) mu_i, +inf if any term is +inf.
double modular(const OrliczContext& ctx, const MeasurableFn& f);

inline constexpr double kDefaultNormTol = 1e-10;

/// Luxemburg norm inf{ k > 0 : I_Phi(f/k) <= 1 } by bisection on k with
/// relative tolerance tol. The returned k satisfies I_Phi(f/k) <= 1.
/// Returns +inf for f with a non-finite entry.
double luxemburg_norm(const OrliczContext& ctx, const MeasurableFn& f,
                      double tol = kDefaultNormTol);

/// On a finite space: some k > 0 makes I_Phi(kf) finite iff f is finite-valued.
bool in_orlicz_space(const OrliczContext& ctx, const MeasurableFn& f);

}  // namespace owct
