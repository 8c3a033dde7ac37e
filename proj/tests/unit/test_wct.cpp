#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "owct/detail/random.hpp"
#include "owct/generator.hpp"
#include "owct/wct.hpp"

using namespace owct;

namespace {

MeasurableFn v2(double a, double b) { return (MeasurableFn(2) << a, b).finished(); }

WctOperator one_block(double w1, double w2) {
  return WctOperator(v2(1, 1), v2(w1, w2), CondExp(FiniteMeasureSpace({1.0, 1.0}), Partition::single_block(2)));
}

WctOperator r1() { return one_block(1, -1); }
WctOperator r3() { return one_block(0.5, 0.5); }
WctOperator r4() { return one_block(2, 2); }

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

const Eigen::MatrixXd kI2 = Eigen::MatrixXd::Identity(2, 2);

}  // namespace

TEST(Wct, ApplyExamples) {
  EXPECT_TRUE(r1().apply(v2(1, 0)).isApprox(v2(0.5, -0.5)));
  EXPECT_TRUE(r3().apply(v2(1, 1)).isApprox(v2(0.5, 0.5)));
  EXPECT_TRUE(r1().h().isZero());
  EXPECT_TRUE(r3().h().isApprox(v2(0.5, 0.5)));
  EXPECT_TRUE(r4().h().isApprox(v2(2, 2)));
}

TEST(Wct, MatrixExamples) {
  Eigen::MatrixXd m1(2, 2);
  m1 << 0.5, 0.5, -0.5, -0.5;
  EXPECT_LE(max_abs(r1().matrix() - m1), 1e-15);
  EXPECT_LE(max_abs(matrix_of(r3()) - Eigen::MatrixXd::Constant(2, 2, 0.25)), 1e-15);
}

TEST(Wct, RejectsBadInputs) {
  const CondExp e(FiniteMeasureSpace({1.0, 1.0}), Partition::single_block(2));
  EXPECT_THROW(WctOperator(MeasurableFn::Ones(3), v2(1, 1), e), std::invalid_argument);
  EXPECT_THROW(WctOperator(v2(NAN, 1), v2(1, 1), e), std::invalid_argument);
}

TEST(Wct, MatrixMatchesIndicatorOracleAndIsLinear) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const Scenario s = generate_random_instance(100 + t, 7, 3, Profile::generic);
    const WctOperator op = s.op();
    const auto m = oracle::wct_matrix(op.u(), op.w(), s.space().weights(), s.blocks);
    EXPECT_LE(max_abs(op.matrix() - m), 1e-13);
    const MeasurableFn f = detail::random_function(7, rng), g = detail::random_function(7, rng);
    const double a = detail::uniform(rng, -2, 2);
    EXPECT_LE((op.apply(a * f + g) - (a * op.apply(f) + op.apply(g))).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Iterate, Examples) {
  EXPECT_LE(max_abs(iterate(r1(), 2, Mode::closed_form)), 1e-15);
  EXPECT_LE(max_abs(iterate(r1(), 2, Mode::direct)), 1e-15);
  EXPECT_LE(max_abs(iterate(r3(), 3, Mode::closed_form) - 0.25 * r3().matrix()), 1e-15);
  EXPECT_THROW(iterate(r3(), 0, Mode::direct), std::invalid_argument);
}

TEST(Iterate, ModesAgreeOnRandomInstances) {
  for (int t = 0; t < 100; ++t) {
    const Profile p = all_profiles()[static_cast<std::size_t>(t) % all_profiles().size()];
    const WctOperator op = generate_random_instance(500 + t, 9, 3, p).op();
    const Eigen::MatrixXd m = op.matrix();
    Eigen::MatrixXd power = m;
    for (int n = 1; n <= 6; ++n) {
      const Eigen::MatrixXd cf = iterate(op, n, Mode::closed_form);
      EXPECT_LE(max_abs(cf - iterate(op, n, Mode::direct)), 1e-9 * (1 + max_abs(power))) << to_string(p);
      EXPECT_LE(max_abs(cf - power), 1e-9 * (1 + max_abs(power)));
      power = power * m;
    }
  }
}

TEST(Cesaro, Weights) {
  EXPECT_DOUBLE_EQ(cesaro_weight(v2(0.5, 0.5), 3)(0), 1.5);
  EXPECT_DOUBLE_EQ(cesaro_weight(v2(0.5, 0.5), 2)(0), 1.0);
  EXPECT_DOUBLE_EQ(cesaro_weight(v2(0.5, 0.5), 1)(0), 0.0);
  EXPECT_DOUBLE_EQ(b_n_weight(v2(0.5, 0.5), 4)(0), 2.5);
  EXPECT_DOUBLE_EQ(b_n_weight(v2(0.5, 0.5), 2)(0), 0.0);
}

TEST(Cesaro, MeansExamples) {
  const auto t = r3();
  const Eigen::MatrixXd m = t.matrix();
  EXPECT_LE(max_abs(cesaro_mean(t, 3, Mode::closed_form) - (kI2 + 1.5 * m) / 3), 1e-15);
  EXPECT_LE(max_abs(cesaro_mean(t, 3, Mode::direct) - (kI2 + m + m * m) / 3), 1e-15);
  EXPECT_LE(max_abs(cesaro_mean(r1(), 2, Mode::closed_form) - (kI2 + r1().matrix()) / 2), 1e-15);
  EXPECT_LE(max_abs(cesaro_mean(t, 1, Mode::direct) - kI2), 0.0);
  EXPECT_LE(max_abs(b_n_operator(t, 4, Mode::closed_form) - (2.5 * m + 3 * kI2) / 4), 1e-15);
  EXPECT_LE(max_abs(b_n_operator(t, 4, Mode::direct) - (m * m + 2 * m + 3 * kI2) / 4), 1e-15);
  EXPECT_LE(max_abs(b_n_operator(t, 2, Mode::closed_form) - kI2 / 2), 1e-15);
}

TEST(Cesaro, DomainErrors) {
  EXPECT_THROW(cesaro_mean(r3(), 0, Mode::direct), std::invalid_argument);
  EXPECT_THROW(b_n_operator(r3(), 1, Mode::closed_form), std::invalid_argument);
  EXPECT_THROW(b_n_limit(one_block(1, 1)), std::domain_error);
  EXPECT_THROW(cesaro_limit(r4()), std::domain_error);
}

TEST(Cesaro, TelescopingIdentityExactOnR1) {
  const auto t = r1();
  const Eigen::MatrixXd m = t.matrix();
  const Eigen::MatrixXd lhs = (kI2 - m) * cesaro_mean(t, 5, Mode::direct);
  const Eigen::MatrixXd rhs = (kI2 - iterate(t, 5, Mode::direct)) / 5;
  EXPECT_LE(max_abs(lhs - rhs), 1e-15);
  EXPECT_LE(cesaro_residuals(t, 5).max(), 1e-14);
}

TEST(Cesaro, LimitsOnR3) {
  const auto t = r3();
  const Eigen::MatrixXd inv = (kI2 - t.matrix()).inverse();
  EXPECT_LE(max_abs(b_n_limit(t) - inv), 1e-14);
  EXPECT_LE(max_abs(cesaro_limit(t)), 0.0);
  // h = 1 everywhere: the limit is T itself, a projection.
  const auto p = one_block(1, 1);
  EXPECT_LE(max_abs(cesaro_limit(p) - p.matrix()), 1e-15);
  EXPECT_LE(max_abs(cesaro_mean(p, 400, Mode::closed_form) - p.matrix()), 1.0 / 400 + 1e-12);
}

TEST(Cesaro, ResidualsSmallOnRandomInstances) {
  for (int t = 0; t < 30; ++t) {
    const Profile p = all_profiles()[static_cast<std::size_t>(t) % all_profiles().size()];
    const auto op = generate_random_instance(900 + t, 8, 3, p).op();
    for (int n = 2; n <= 12; ++n) EXPECT_LE(cesaro_residuals(op, n).max(), 1e-10) << to_string(p) << " n=" << n;
  }
}

TEST(Adjoint, SwapProperty) {
  for (int t = 0; t < 50; ++t) {
    const Scenario s = generate_random_instance(300 + t, 6, 2, Profile::generic);
    const auto op = s.op();
    const Eigen::MatrixXd adj = pairing_adjoint(op.matrix(), s.space());
    EXPECT_LE(max_abs(adj - op.swapped().matrix()), 1e-12 * (1 + max_abs(adj)));
  }
}

TEST(Bound, Examples) {
  const auto phi = YoungFunction::power_scaled(2);
  const auto psi = complementary(phi);
  EXPECT_NEAR(bound_multiplier(r3(), psi), 0.5, 1e-9);
  EXPECT_NEAR(bound_constant(r3(), phi, psi, 2.0), 1.0, 2e-9);
  EXPECT_THROW(bound_constant(r3(), phi, psi, 0.0), std::invalid_argument);

  const MeasurableFn u = (MeasurableFn(3) << 1, -2, 0.5).finished();
  const MeasurableFn w = (MeasurableFn(3) << 3, 1, -4).finished();
  const WctOperator fine(u, w, CondExp(FiniteMeasureSpace({1.0, 2.0, 0.5}), Partition::finest(3)));
  EXPECT_NEAR(bound_multiplier(fine, psi), ess_sup(w.cwiseProduct(u.cwiseAbs())), 1e-8);
}

TEST(Bound, DominatesEstimatedNorm) {
  const auto phi = YoungFunction::power_scaled(2);
  const auto psi = complementary(phi);
  for (int t = 0; t < 20; ++t) {
    const Scenario s = generate_random_instance(40 + t, 6, 2, Profile::generic);
    const auto op = s.op();
    const OrliczContext ctx{s.space(), phi};
    // The GCH constant for this pair is 1.
    EXPECT_LE(norm_estimate(op.matrix(), ctx, 8, 1), bound_constant(op, phi, psi, 1.0) * (1 + 1e-8));
  }
}

TEST(NormEstimate, Examples) {
  const OrliczContext ctx{FiniteMeasureSpace({1.0, 2.0}), YoungFunction::power_plain(3)};
  EXPECT_EQ(norm_estimate(Eigen::MatrixXd::Zero(2, 2), ctx, 4, 0), 0.0);
  EXPECT_NEAR(norm_estimate(kI2, ctx, 4, 0), 1.0, 1e-9);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d.diagonal() << 3, 1;
  EXPECT_NEAR(norm_estimate(d, ctx, 4, 0), 3.0, 1e-8);
  EXPECT_THROW(norm_estimate(kI2, ctx, 0, 0), std::invalid_argument);
}

TEST(NormEstimate, ExactForWeightedL2) {
  const auto phi = YoungFunction::power_plain(2);
  for (int t = 0; t < 20; ++t) {
    const Scenario s = generate_random_instance(70 + t, 5, 2, Profile::generic);
    const Eigen::MatrixXd m = s.op().matrix();
    const double exact = weighted_l2_norm(m, s.space());
    EXPECT_NEAR(norm_estimate(m, {s.space(), phi}, 8, 2), exact, 1e-8 * (1 + exact));
  }
}

TEST(PowerBounded, R3DecaysGeometrically) {
  const auto phi = YoungFunction::power_scaled(2);
  const auto rep = power_bounded_report(r3(), phi, complementary(phi), 10);
  EXPECT_TRUE(rep.criterion_holds);
  EXPECT_EQ(rep.sup_attained_at, 1);
  EXPECT_FALSE(rep.growth_detected);
  EXPECT_TRUE(rep.h_powers_bounded);
  ASSERT_EQ(rep.norms.size(), 10u);
  for (std::size_t k = 1; k < rep.norms.size(); ++k) EXPECT_NEAR(rep.norms[k], 0.5 * rep.norms[k - 1], 1e-8);
}

TEST(PowerBounded, R4Grows) {
  const auto phi = YoungFunction::power_scaled(2);
  const auto rep = power_bounded_report(r4(), phi, complementary(phi), 10);
  EXPECT_FALSE(rep.criterion_holds);
  EXPECT_TRUE(rep.growth_detected);
  EXPECT_FALSE(rep.h_powers_bounded);
  for (std::size_t k = 1; k < rep.norms.size(); ++k) EXPECT_NEAR(rep.norms[k] / rep.norms[k - 1], 2.0, 1e-8);
}

TEST(PowerBounded, R1Nilpotent) {
  const auto phi = YoungFunction::power_scaled(2);
  const auto rep = power_bounded_report(r1(), phi, complementary(phi), 6);
  EXPECT_TRUE(rep.criterion_holds);
  EXPECT_GT(rep.norms[0], 0.0);
  for (std::size_t k = 1; k < rep.norms.size(); ++k) EXPECT_EQ(rep.norms[k], 0.0);
}
