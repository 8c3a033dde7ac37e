#pragma once

#include <cstdint>
#include <vector>

#include "owct/claim.hpp"
#include "owct/measure.hpp"
#include "owct/young.hpp"

namespace owct {

/// Conditional expectation onto the sigma-algebra generated by a partition:
/// block-wise mu-weighted averaging.
class CondExp {
public:
  CondExp(FiniteMeasureSpace space, Partition partition);

  const FiniteMeasureSpace& space() const { return space_; }
  const Partition& partition() const { return partition_; }
  std::size_t size() const { return space_.size(); }
  double block_mass(std::size_t block) const { return block_mass_[block]; }

  /// Block averages of a finite-valued f.
  MeasurableFn operator()(const MeasurableFn& f) const;
  /// Same for nonnegative extended-real input; a +inf entry makes its block +inf.
  MeasurableFn apply_extended(const MeasurableFn& f) const;
  /// Dense matrix of E; entry (i, j) is mu_j / mu(block) when i, j share a block.
  Eigen::MatrixXd matrix() const;

private:
  FiniteMeasureSpace space_;
  Partition partition_;
  std::vector<double> block_mass_;
};

inline MeasurableFn cond_exp(const CondExp& e, const MeasurableFn& f) { return e(f); }

/// <f, g> = sum_i f_i g_i mu_i.
double pairing(const FiniteMeasureSpace& space, const MeasurableFn& f, const MeasurableFn& g);

/// Random checks of the algebraic laws of E: pull-out of measurable
/// factors, Jensen, positivity, support containment, support equality of
/// E(f) and E(Phi(f)) for f >= 0, and contraction in the Luxemburg norm.
std::vector<ClaimResult> check_condexp_laws(const CondExp& e, const YoungFunction& phi, int trials,
                                            double tol, std::uint64_t seed = 0);

struct GchEstimate {
  /// Largest sampled ratio E|fg| / (Phi^-1(E Phi|f|) Psi^-1(E Psi|g|)); a
  /// lower bound for the best constant, labelled empirical.
  double constant = 0.0;
  MeasurableFn f;
  MeasurableFn g;
  std::size_t atom = 0;
  std::size_t pairs_evaluated = 0;
};

/// Checks psi against phi by a Young-inequality grid audit and a tightness
/// probe; throws std::invalid_argument when they are not complementary.
void audit_complementary_pair(const YoungFunction& phi, const YoungFunction& psi);

/// Empirical constant of the conditional Hoelder-type inequality. Samples
/// random (f, g), then runs one coordinate-ascent refinement from the best
/// pair. Atoms whose denominator is below 1e-12 are skipped.
GchEstimate estimate_gch_constant(const CondExp& e, const YoungFunction& phi,
                                  const YoungFunction& psi, int samples, std::uint64_t seed);

}  // namespace owct
