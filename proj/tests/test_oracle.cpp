#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qsv/attacks.hpp"
#include "qsv/oracle.hpp"
#include "qsv/random.hpp"

namespace qsv {
namespace {

OracleConfig small_config(int samples) {
  OracleConfig c;
  c.sample_count = samples;
  return c;
}

TEST(Registry, NamesAreUniqueAndRunnable) {
  const auto& names = check_names();
  EXPECT_EQ(names.size(), 36u);
  std::set<std::string> unique(names.begin(), names.end());
  EXPECT_EQ(unique.size(), names.size());
  EXPECT_THROW(run_check("no_such_check", {}), UnknownCheckError);
}

TEST(Registry, EveryCheckPassesOnSmallSample) {
  for (const auto& r : run_all(small_config(20))) {
    EXPECT_TRUE(r.passed) << r.name << " worst " << r.worst_violation << " " << r.witness;
    EXPECT_GT(r.samples, 0) << r.name;
    EXPECT_LE(r.worst_violation, r.tolerance) << r.name;
  }
}

TEST(Registry, SeededRunsAreReproducible) {
  auto a = inequality_sweep("fvdg_trace_bounds", 50, 99);
  auto b = inequality_sweep("fvdg_trace_bounds", 50, 99);
  EXPECT_EQ(a.worst_violation, b.worst_violation);
  EXPECT_EQ(a.witness, b.witness);
  auto c = inequality_sweep("fvdg_trace_bounds", 50, 100);
  EXPECT_NE(a.witness, c.witness);
}

TEST(Config, Validation) {
  OracleConfig c;
  EXPECT_NO_THROW(c.validate());
  c.grid_points = 1;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.tolerance = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Grid, StandaloneMatchesClosedForm) {
  Rng rng = make_rng(23, 1);
  for (int s = 0; s < 5; ++s) {
    auto t = TargetState::pure(haar_pure_state(2, rng));
    AbortingState out(0.2 + 0.15 * s, random_density(2, rng));
    auto exact = standalone_fidelity_dishonest(out, t);
    auto grid = grid_max_ideal_p(out, t, Definition::standalone, 10000);
    EXPECT_NEAR(grid.value, exact.value, 1e-6);
    EXPECT_LE(grid.value, exact.value + 1e-12);
    auto fine = refined_ideal_p(out, t, Definition::standalone, 10000);
    EXPECT_NEAR(fine.value, exact.value, 1e-10);
    EXPECT_NEAR(fine.best_p, exact.best_p, 1e-4);
  }
}

TEST(Grid, ComposableMatchesClosedForm) {
  Rng rng = make_rng(23, 2);
  for (int s = 0; s < 5; ++s) {
    auto t = TargetState::pure(haar_pure_state(3, rng));
    AbortingState out(0.1 + 0.2 * s, random_density(3, rng));
    auto exact = composable_distance_dishonest(out, t);
    auto fine = refined_ideal_p(out, t, Definition::composable, 10000);
    EXPECT_NEAR(fine.value, exact.value, 1e-9);
    EXPECT_GE(fine.value, exact.value - 1e-12);
  }
}

TEST(Grid, TiesGoToSmallestP) {
  // Rejected output: the fidelity with p phi (+) (1-p) is 1 - p, maximal at p = 0.
  auto t = TargetState::basis(2, 0);
  auto g = grid_max_ideal_p(AbortingState::rejected(2), t, Definition::standalone, 101);
  EXPECT_DOUBLE_EQ(g.best_p, 0.0);
  EXPECT_NEAR(g.value, 1.0, 1e-12);
}

TEST(Multicopy, PureStateIdentity) {
  Rng rng = make_rng(23, 3);
  auto a = haar_pure_state(2, rng), b = haar_pure_state(2, rng);
  const double f = overlap_sq(a, b);
  for (int k = 1; k <= 4; ++k) {
    EXPECT_NEAR(exact_multicopy_distance(DensityOperator::from_pure(a), DensityOperator::from_pure(b), k),
                std::sqrt(1.0 - std::pow(f, k)), 1e-10);
  }
  EXPECT_THROW(exact_multicopy_distance(DensityOperator::from_pure(a), DensityOperator::from_pure(b), 13),
               SizeCapError);
}

TEST(Entangled, SweepRespectsCeiling) {
  for (int n = 1; n <= 3; ++n) {
    auto r = entangled_attack_sweep(n, 2, 20, 5);
    EXPECT_TRUE(r.passed) << n << " " << r.witness;
    EXPECT_EQ(r.samples, 20);
  }
}

}  // namespace
}  // namespace qsv
