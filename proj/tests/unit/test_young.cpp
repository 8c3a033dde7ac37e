#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "owct/young.hpp"

using namespace owct;

namespace {

std::vector<YoungFunction> catalog() {
  return {YoungFunction::power_scaled(1.5), YoungFunction::power_scaled(2),
          YoungFunction::power_scaled(3),   YoungFunction::power_plain(1.5),
          YoungFunction::power_plain(2),    YoungFunction::power_plain(3),
          YoungFunction::exp_type(),        YoungFunction::deadzone(),
          YoungFunction::capped()};
}

}  // namespace

TEST(Eval, Examples) {
  EXPECT_DOUBLE_EQ(YoungFunction::power_plain(2)(-3), 9.0);
  for (const auto& phi : catalog()) EXPECT_EQ(phi(0.0), 0.0) << phi.describe();
  EXPECT_TRUE(std::isinf(YoungFunction::capped()(2.0)));
  EXPECT_DOUBLE_EQ(YoungFunction::capped()(1.0), 1.0);
}

TEST(Eval, ParametersAndKinds) {
  EXPECT_THROW(YoungFunction::power_plain(1.0), std::invalid_argument);
  EXPECT_EQ(YoungFunction::deadzone().a_phi(), 1.0);
  EXPECT_EQ(YoungFunction::capped().b_phi(), 1.0);
  EXPECT_TRUE(std::isinf(YoungFunction::exp_type().b_phi()));
  EXPECT_EQ(young_kind_from_string("exp_type"), YoungKind::exp_type);
  EXPECT_THROW(young_kind_from_string("nope"), std::invalid_argument);
  EXPECT_EQ(YoungFunction::from_spec("power_plain", {3}).params()[0], 3.0);
}

TEST(Eval, ExpTypeSmallArgumentAccurate) {
  const auto phi = YoungFunction::exp_type();
  for (double x : {1e-8, 1e-5, 1e-4, 9e-4}) {
    const double series = x * x / 2 + std::pow(x, 3) / 6 + std::pow(x, 4) / 24 + std::pow(x, 5) / 120 + std::pow(x, 6) / 720;
    EXPECT_NEAR(phi(x), series, 1e-14 * series) << x;
  }
}

TEST(Eval, EvenConvexNondecreasing) {
  for (const auto& phi : catalog()) {
    const double top = std::min(phi.b_phi(), 20.0);
    double prev = 0.0;
    for (int k = 1; k <= 200; ++k) {
      const double x = top * k / 200.0;
      const double a = phi(x), b = phi(x - top / 400), c = phi(x - top / 200);
      EXPECT_EQ(phi(-x), a);
      EXPECT_GE(a, prev);
      if (std::isfinite(a)) EXPECT_LE(b, 0.5 * (a + c) + 1e-12 * (1 + a)) << phi.describe() << " x=" << x;
      prev = a;
    }
  }
}

TEST(Complementary, PowerScaledClosedForm) {
  const auto psi = complementary(YoungFunction::power_scaled(2));
  EXPECT_EQ(psi.kind(), YoungKind::power_scaled);
  EXPECT_DOUBLE_EQ(psi(3.0), 4.5);
  const auto psi3 = complementary(YoungFunction::power_scaled(3));
  EXPECT_NEAR(psi3.params()[0], 1.5, 1e-15);
}

TEST(Complementary, AtZeroIsZero) {
  for (const auto& phi : catalog()) EXPECT_NEAR(complementary(phi)(0.0), 0.0, 1e-15) << phi.describe();
}

TEST(Complementary, DeadzoneMatchesGridOracle) {
  const auto psi = complementary(YoungFunction::deadzone());
  const double expected =
      oracle::grid_conjugate([](double x) { return std::max(0.0, x - 1.0); }, 0.5, 100.0, 1e-4);
  EXPECT_NEAR(expected, 0.5, 1e-9);
  EXPECT_NEAR(psi(0.5), expected, 1e-8);
  EXPECT_DOUBLE_EQ(psi.b_phi(), 1.0);
}

TEST(Complementary, NumericMatchesGridOracle) {
  for (const auto& phi : {YoungFunction::power_plain(2), YoungFunction::exp_type(), YoungFunction::capped()}) {
    const auto psi = complementary(phi);
    for (double y : {0.3, 1.0, 1.7}) {
      const double top = std::isinf(phi.b_phi()) ? 20.0 : phi.b_phi();
      const double g = oracle::grid_conjugate([&](double x) { return phi(x); }, y, top, 1e-5);
      EXPECT_NEAR(psi(y), g, 1e-6 * (1 + g)) << phi.describe() << " y=" << y;
    }
  }
}

TEST(Complementary, CappedClosedFormOracle) {
  // sup{xy - x^2 : x <= 1} = y^2/4 for y <= 2, y - 1 beyond.
  const auto psi = complementary(YoungFunction::capped());
  for (double y : {0.5, 1.0, 2.0, 3.0, 10.0}) {
    const double exact = y <= 2 ? y * y / 4 : y - 1;
    EXPECT_NEAR(psi(y), exact, 1e-9 * (1 + exact)) << y;
  }
}

TEST(Complementary, RejectsBadGrid) {
  EXPECT_THROW(complementary(YoungFunction::exp_type(), 0.0, 400), std::invalid_argument);
  EXPECT_THROW(complementary(YoungFunction::exp_type(), 1e6, 50), std::invalid_argument);
}

TEST(Complementary, BiconjugationPowerScaled) {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto phi = YoungFunction::power_scaled(p);
    const auto back = complementary(complementary(phi));
    for (double x : {0.01, 0.5, 1.0, 3.0, 10.0}) EXPECT_NEAR(back(x), phi(x), 1e-6 * (1 + phi(x)));
  }
}

TEST(GeneralizedInverse, Examples) {
  EXPECT_NEAR(generalized_inverse(YoungFunction::power_plain(2), 9.0), 3.0, 1e-9);
  EXPECT_NEAR(generalized_inverse(YoungFunction::deadzone(), 0.0), 1.0, 1e-9);
  // x^2 / 2 = 2 -> x = 2.
  EXPECT_NEAR(generalized_inverse(YoungFunction::power_scaled(2), 2.0), 2.0, 1e-9);
  EXPECT_NEAR(generalized_inverse(YoungFunction::capped(), 5.0), 1.0, 1e-9);
}

TEST(GeneralizedInverse, RoundTripProperties) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lg(-4, 4);
  for (const auto& phi : catalog()) {
    for (int t = 0; t < 1000; ++t) {
      const double x = std::pow(10.0, lg(rng));
      const double inv = generalized_inverse(phi, x);
      EXPECT_LE(phi(inv), x * (1 + 1e-12)) << phi.describe();
      const double fx = phi(x);
      if (std::isfinite(fx)) EXPECT_LE(x, generalized_inverse(phi, fx) + 1e-8 * (1 + x)) << phi.describe();
      if (phi.is_strict_n_function() && std::isfinite(fx) && fx < 1e300)
        EXPECT_NEAR(generalized_inverse(phi, fx), x, 1e-8 * (1 + x)) << phi.describe() << " x=" << x;
    }
  }
}

TEST(Growth, Delta2PowerPlain) {
  const auto r = check_growth_condition(GrowthKind::delta2, YoungFunction::power_plain(2), nullptr, 0.0,
                                        GridSpec{1e-3, 1e3, 61, true});
  EXPECT_TRUE(r.holds_on_grid);
  ASSERT_TRUE(r.witness_constant);
  EXPECT_NEAR(*r.witness_constant, 4.0, 1e-12);
}

TEST(Growth, Delta2FailsForCapped) {
  const auto r = check_growth_condition(GrowthKind::delta2, YoungFunction::capped(), nullptr, 0.0,
                                        GridSpec{0.1, 0.9, 9, false});
  EXPECT_FALSE(r.holds_on_grid);
}

TEST(Growth, YoungEqualityAtConjugatePoint) {
  const auto phi = YoungFunction::power_scaled(2);
  const auto psi = complementary(phi);
  const auto r = check_growth_condition(GrowthKind::young_ineq, phi, &psi, 0.0, GridSpec{1, 1, 1, false});
  EXPECT_TRUE(r.holds_on_grid);
  EXPECT_NEAR(*r.witness_constant, 0.0, 1e-15);
}

TEST(Growth, InverseProductAtTwo) {
  const auto phi = YoungFunction::power_scaled(2);
  const auto psi = complementary(phi);
  const double prod = generalized_inverse(phi, 2) * generalized_inverse(psi, 2);
  EXPECT_NEAR(prod, std::sqrt(4.0) * std::sqrt(4.0), 1e-8);
  EXPECT_GT(prod, 2.0);
  EXPECT_LE(prod, 4.0 + 1e-8);
  const auto r = check_growth_condition(GrowthKind::inverse_product, phi, &psi, 0.0, GridSpec{2, 2, 1, false});
  EXPECT_TRUE(r.holds_on_grid);
}

TEST(Growth, PsiRequired) {
  EXPECT_THROW(check_growth_condition(GrowthKind::young_ineq, YoungFunction::exp_type(), nullptr, 0.0, {}),
               std::invalid_argument);
}

TEST(Growth, CatalogPairsOnWideGrid) {
  const GridSpec grid{1e-6, 1e6, 61, true};
  for (const auto& phi : catalog()) {
    const auto psi = complementary(phi);
    EXPECT_TRUE(check_growth_condition(GrowthKind::young_ineq, phi, &psi, 0.0, grid).holds_on_grid) << phi.describe();
    EXPECT_TRUE(check_growth_condition(GrowthKind::inverse_product, phi, &psi, 0.0, grid).holds_on_grid)
        << phi.describe();
  }
}
