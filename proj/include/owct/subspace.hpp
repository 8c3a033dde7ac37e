#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "owct/claim.hpp"
#include "owct/orlicz.hpp"
#include "owct/wct.hpp"

namespace owct {

inline constexpr double kDefaultRankTol = 1e-8;

/// Orthonormal columns (unweighted dot product) spanning a subspace of
/// R^ambient, with the rank tolerance that produced them.
struct SubspaceBasis {
  Eigen::MatrixXd vectors;
  double tol = kDefaultRankTol;

  std::size_t ambient() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  bool is_full() const { return dim() == ambient(); }
  bool is_zero() const { return dim() == 0; }

  static SubspaceBasis zero(std::size_t n, double tol = kDefaultRankTol);
  static SubspaceBasis full(std::size_t n, double tol = kDefaultRankTol);
};

/// Singular values and the threshold separating kernel from range:
/// max(tol * sigma_max, abs_floor), or max(tol, abs_floor) when sigma_max = 0.
struct RankInfo {
  Eigen::VectorXd singular_values;
  double threshold = 0.0;
  std::size_t rank = 0;
  /// Some singular value lies within 10% of the threshold.
  bool ill_conditioned = false;
};

RankInfo rank_info(const Eigen::MatrixXd& m, double tol, double abs_floor = 0.0);

SubspaceBasis null_space(const Eigen::MatrixXd& m, double tol, double abs_floor = 0.0);
SubspaceBasis range_space(const Eigen::MatrixXd& m, double tol, double abs_floor = 0.0);

/// Powers m^0 .. m^k_max with per-power thresholds. For k >= 2 the
/// threshold tol * sigma_max(m^k) is floored at 1e-12 * || |m|^k ||_2, the
/// scale of the roundoff a k-fold product can leave behind.
struct PowerChain {
  std::vector<Eigen::MatrixXd> powers;
  std::vector<RankInfo> ranks;
  double tol = kDefaultRankTol;

  std::size_t null_dim(std::size_t k) const;
  std::size_t range_dim(std::size_t k) const { return ranks[k].rank; }
  SubspaceBasis null_space(std::size_t k) const;
  SubspaceBasis range_space(std::size_t k) const;
  bool ill_conditioned() const;
};

PowerChain power_chain(const Eigen::MatrixXd& m, int k_max, double tol);

/// Smallest k <= k_max with dim N(m^k) = dim N(m^(k+1)); nullopt if none.
std::optional<int> ascent_of(const Eigen::MatrixXd& m, int k_max, double tol);
/// Smallest k <= k_max with dim R(m^k) = dim R(m^(k+1)); nullopt if none.
std::optional<int> descent_of(const Eigen::MatrixXd& m, int k_max, double tol);
std::optional<int> ascent_of(const PowerChain& chain);
std::optional<int> descent_of(const PowerChain& chain);

/// Principal-angle based sum and intersection at tolerance max(a.tol, b.tol)
/// on the sines. dim(a + b) + dim(a ∩ b) = dim a + dim b holds exactly.
SubspaceBasis subspace_sum(const SubspaceBasis& a, const SubspaceBasis& b);
SubspaceBasis subspace_intersection(const SubspaceBasis& a, const SubspaceBasis& b);

struct StructureOptions {
  /// Lower bound on |h| over S(h) for the descent hypothesis.
  double delta = 1e-10;
  int k_max = 8;
  int ergodic_samples = 100;
  int ergodic_n = 200;
  /// Bound on ||T L - L||_inf / (1 + ||L||_inf) for the Cesaro limit L.
  double invariance_tol = 1e-8;
  std::uint64_t seed = 0;
  /// Complementary of ctx.phi; computed when null.
  const YoungFunction* psi = nullptr;
};

struct StructureReport {
  std::vector<ClaimResult> claims;
  std::optional<int> ascent;
  std::optional<int> descent;
  /// A singular value of some power sits at the rank threshold.
  bool ill_conditioned = false;
};

/// Ascent/descent bounds, range/kernel decompositions, the I - T claims and
/// the ergodic chain, each evaluated under its own hypothesis.
StructureReport verify_structure_theorems(const WctOperator& t, const OrliczContext& ctx,
                                          double tol, const StructureOptions& opts = {});

}  // namespace owct
