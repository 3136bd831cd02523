#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qsv/bounds.hpp"
#include "qsv/core.hpp"
#include "qsv/random.hpp"

namespace qsv {
namespace {

TEST(Bounds, StandaloneConstants) {
  auto b = standalone_bound(9);
  EXPECT_DOUBLE_EQ(b.loose, 1.0 / 63.0);
  EXPECT_DOUBLE_EQ(b.tight, 4.0 / 243.0);
  EXPECT_GT(b.tight, b.loose);
  EXPECT_THROW(standalone_bound(0), ValidationError);
}

TEST(Bounds, ComposableConstants) {
  EXPECT_DOUBLE_EQ(composable_bound(25), 0.05);
  EXPECT_DOUBLE_EQ(composable_bound(16, 0.64), 0.05);
  EXPECT_THROW(composable_bound(0), ValidationError);
  EXPECT_THROW(composable_bound(4, 1.5), ValidationError);
}

TEST(Bounds, PreBoundMaximizedAtFourNinths) {
  const double n = 10.0;
  const double peak = standalone_pre_bound(4.0 / 9.0, n);
  EXPECT_NEAR(peak, 4.0 / (27.0 * n), 1e-16);
  for (int k = 1; k < 1000; ++k) EXPECT_LE(standalone_pre_bound(k / 1000.0, n), peak + 1e-16);
}

TEST(Bounds, CanonicalValues) {
  auto c = canonical_security_values(3);
  EXPECT_DOUBLE_EQ(c.standalone, 0.25);
  EXPECT_DOUBLE_EQ(c.composable, 1.0);
}

TEST(Bounds, KappaConversion) {
  EXPECT_DOUBLE_EQ(composable_from_kappa(0.0), 0.0);
  EXPECT_DOUBLE_EQ(composable_from_kappa(1.0), 2.0);
  EXPECT_NEAR(composable_from_kappa(0.5), 2.0 * std::sqrt(0.75), 1e-15);
  EXPECT_THROW(composable_from_kappa(1.1), ValidationError);
}

TEST(Bounds, VariableRoundAndNamed) {
  auto v = variable_round_bounds(10.0, 0.5);
  EXPECT_DOUBLE_EQ(v.standalone, 1.0 / 70.0);
  EXPECT_NEAR(v.composable, std::sqrt(0.5) / (4.0 * std::sqrt(10.0)), 1e-16);
  auto named = named_bounds(4);
  ASSERT_EQ(named.size(), 5u);
  EXPECT_EQ(named[2].name, "composable");
  EXPECT_DOUBLE_EQ(named[2].value, 0.125);
}

TEST(BN, NaiveVectorAttainsOmega) {
  std::vector<double> omega{0.1, 0.6, 0.3};
  std::vector<double> f{1.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(b_n(f, omega), 0.6);
  std::vector<double> ones{1.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(b_n(ones, omega), 0.0);
  std::vector<double> two_zeros{0.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(b_n(two_zeros, omega), 0.0);
}

TEST(BN, TwoRoundClosedForm) {
  Rng rng = make_rng(13, 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 1000; ++s) {
    const double a = u(rng), b = u(rng), w = u(rng);
    std::vector<double> f{a, b}, omega{w, 1.0 - w};
    const double ref = w * (1 - a) * (1 - std::sqrt(1 - b)) + (1 - w) * (1 - b) * (1 - std::sqrt(1 - a));
    EXPECT_NEAR(b_n(f, omega), ref, 1e-14);
    EXPECT_LE(b_n(f, omega), std::max(w, 1.0 - w) + 1e-12);
  }
}

TEST(BN, NeverExceedsMaxOmega) {
  Rng rng = make_rng(13, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    for (int s = 0; s < 2000; ++s) {
      std::vector<double> f(n + 1), omega(n + 1);
      double total = 0.0;
      for (int i = 0; i <= n; ++i) {
        f[i] = u(rng);
        omega[i] = u(rng);
        total += omega[i];
      }
      double top = 0.0;
      for (auto& w : omega) top = std::max(top, w /= total);
      EXPECT_LE(b_n(f, omega), top + 1e-9);
    }
  }
}

TEST(BN, RejectsBadInput) {
  std::vector<double> f{0.5, 1.2}, omega{0.5, 0.5}, short_omega{1.0};
  EXPECT_THROW(b_n(f, omega), ValidationError);
  EXPECT_THROW(b_n(f, short_omega), DimensionError);
}

}  // namespace
}  // namespace qsv
