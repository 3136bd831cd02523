#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "qsv/protocol.hpp"
#include "qsv/random.hpp"

namespace qsv {
namespace {

// Accepted block of output register `out` by explicit index loops over
// a joint state on d^n (register 0 most significant).
ComplexMatrix accepted_block(const ComplexMatrix& joint, const ComplexMatrix& m, Eigen::Index d, int n, int out) {
  Eigen::Index total = 1;
  for (int r = 0; r < n; ++r) total *= d;
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  auto digit = [&](Eigen::Index idx, int r) {
    for (int k = n - 1; k > r; --k) idx /= d;
    return idx % d;
  };
  for (Eigen::Index row = 0; row < total; ++row) {
    for (Eigen::Index col = 0; col < total; ++col) {
      std::complex<double> w = 1.0;
      for (int r = 0; r < n; ++r) {
        if (r != out) w *= m(digit(col, r), digit(row, r));
      }
      x(digit(row, out), digit(col, out)) += w * joint(row, col);
    }
  }
  return x;
}

TEST(FixedProtocol, CanonicalShape) {
  auto t = TargetState::basis(2, 0);
  auto p = FixedProtocol::canonical(t, 4);
  EXPECT_EQ(p.rounds(), 5);
  EXPECT_EQ(p.omega().size(), 5u);
  for (double w : p.omega()) EXPECT_NEAR(w, 0.2, 1e-15);
  EXPECT_TRUE(p.is_canonical());
  EXPECT_THROW(FixedProtocol::canonical(TargetState::diagonal({0.5, 0.5}, 2), 3), ValidationError);
  EXPECT_FALSE(FixedProtocol::support_projective(TargetState::diagonal({0.5, 0.5}, 3), 3).is_canonical());
  EXPECT_THROW(FixedProtocol::canonical(t, 0), ValidationError);
}

TEST(FixedProtocol, RejectsBadOmega) {
  auto t = TargetState::basis(2, 0);
  auto m = ProductMeasurement::project_onto(t);
  EXPECT_THROW(FixedProtocol(t, 2, {0.5, 0.5}, m), ValidationError);
  EXPECT_THROW(FixedProtocol(t, 2, {0.5, 0.6, -0.1}, m), ValidationError);
  EXPECT_NO_THROW(FixedProtocol(t, 2, {0.5, 0.25, 0.25}, m));
}

TEST(RunFixed, HonestIsExact) {
  Rng rng = make_rng(3, 1);
  auto t = TargetState::pure(haar_pure_state(3, rng));
  auto out = run_fixed(FixedProtocol::canonical(t, 6), Honest{});
  EXPECT_NEAR(out.accept_prob(), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(out.conditional(), t.rho()), 1.0, 1e-9);
}

TEST(RunFixed, IidAcceptIsFidelityPower) {
  Rng rng = make_rng(3, 2);
  auto t = TargetState::pure(haar_pure_state(2, rng));
  auto psi = DensityOperator::from_pure(haar_pure_state(2, rng));
  const double f = fidelity(t.leading(), psi);
  for (int n : {1, 3, 10}) {
    auto out = run_fixed(FixedProtocol::canonical(t, n), IidAttack{psi});
    EXPECT_NEAR(out.accept_prob(), std::pow(f, n), 1e-12);
    EXPECT_NEAR(fidelity(out.conditional(), psi), 1.0, 1e-9);
  }
}

TEST(RunFixed, SeparableMatchesProductFormula) {
  Rng rng = make_rng(3, 3);
  auto t = TargetState::pure(haar_pure_state(2, rng));
  const int n = 3;
  std::vector<DensityOperator> states;
  std::vector<double> f;
  for (int i = 0; i <= n; ++i) {
    states.push_back(random_density(2, rng));
    f.push_back(fidelity(t.leading(), states.back()));
  }
  auto out = run_fixed(FixedProtocol::canonical(t, n), SeparableAttack{states});
  double accept = 0.0;
  ComplexMatrix block = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i <= n; ++i) {
    double prod = 1.0;
    for (int j = 0; j <= n; ++j) prod *= j == i ? 1.0 : f[j];
    accept += prod / (n + 1);
    block += prod / (n + 1) * states[i].matrix();
  }
  EXPECT_NEAR(out.accept_prob(), accept, 1e-12);
  EXPECT_NEAR((out.accept_prob() * out.conditional().matrix() - block).norm(), 0.0, 1e-12);
}

TEST(RunFixed, EntangledMatchesIndexLoops) {
  Rng rng = make_rng(3, 4);
  for (int s = 0; s < 5; ++s) {
    auto t = TargetState::pure(haar_pure_state(2, rng));
    const int n = 2;
    auto joint = random_density(8, rng, 2);
    auto out = run_fixed(FixedProtocol::canonical(t, n), EntangledAttack{joint});
    ComplexMatrix block = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i <= n; ++i) block += accepted_block(joint.matrix(), t.rho().matrix(), 2, n + 1, i) / 3.0;
    EXPECT_NEAR(out.accept_prob(), block.trace().real(), 1e-12);
    EXPECT_NEAR((out.accept_prob() * out.conditional().matrix() - block).norm(), 0.0, 1e-12);
  }
}

TEST(RunFixed, EntangledProductEqualsSeparable) {
  Rng rng = make_rng(3, 5);
  auto t = TargetState::pure(haar_pure_state(2, rng));
  std::vector<DensityOperator> states{random_density(2, rng), random_density(2, rng), random_density(2, rng)};
  auto joint = tensor(tensor(states[0], states[1]), states[2]);
  auto p = FixedProtocol::canonical(t, 2);
  auto a = run_fixed(p, SeparableAttack{states});
  auto b = run_fixed(p, EntangledAttack{joint});
  EXPECT_NEAR(a.accept_prob(), b.accept_prob(), 1e-12);
  EXPECT_NEAR((a.conditional().matrix() - b.conditional().matrix()).norm(), 0.0, 1e-10);
}

TEST(RunFixed, SizeCapAndArity) {
  auto t = TargetState::basis(2, 0);
  EngineLimits tiny{4};
  auto p = FixedProtocol::canonical(t, 3, tiny);
  EXPECT_THROW(run_fixed(p, EntangledAttack{DensityOperator::maximally_mixed(16)}), SizeCapError);
  EXPECT_THROW(run_fixed(FixedProtocol::canonical(t, 2), SeparableAttack{{DensityOperator::basis(2, 0)}}),
               ValidationError);
  EXPECT_THROW(run_fixed(FixedProtocol::canonical(t, 2), EntangledAttack{DensityOperator::maximally_mixed(4)}),
               DimensionError);
}

TEST(AcceptProb, ProductOfFidelities) {
  auto t = TargetState::basis(2, 0);
  auto p = FixedProtocol::canonical(t, 2);
  std::vector<DensityOperator> sent{DensityOperator::maximally_mixed(2), DensityOperator::basis(2, 0)};
  EXPECT_NEAR(accept_prob(p, 0, sent), 0.5, 1e-14);
}

TEST(Registers, RotationMovesRegisterLast) {
  // d = 2, three registers: x = (b0 b1 b2) -> (b0 b2 b1) for reg = 1.
  auto map = register_rotation(2, 3, 1);
  ASSERT_EQ(map.size(), 8u);
  EXPECT_EQ(map[0b010], 0b001);
  EXPECT_EQ(map[0b001], 0b010);
  EXPECT_EQ(map[0b110], 0b101);
  auto last = register_rotation(3, 2, 1);
  for (Eigen::Index x = 0; x < 9; ++x) EXPECT_EQ(last[static_cast<std::size_t>(x)], x);
  EXPECT_THROW(register_rotation(2, 3, 3), ValidationError);
}

TEST(Registers, SymmetrizationKeepsProductOfEqualStates) {
  Rng rng = make_rng(3, 6);
  auto rho = random_density(2, rng);
  ComplexMatrix prod = tensor(rho, rho).matrix();
  EXPECT_NEAR((symmetrize_registers(prod, 2, 2) - prod).norm(), 0.0, 1e-13);
  auto joint = random_density(8, rng);
  ComplexMatrix s = symmetrize_registers(joint.matrix(), 2, 3);
  EXPECT_NEAR(s.trace().real(), 1.0, 1e-13);
  EXPECT_NEAR((s - s.adjoint()).norm(), 0.0, 1e-13);
}

TEST(RoundDistribution, Families) {
  auto pm = RoundDistribution::point_mass(5);
  EXPECT_EQ(pm.n_max(), 5);
  EXPECT_DOUBLE_EQ(pm.mean(), 5.0);

  auto g = RoundDistribution::truncated_geometric(0.5, 3);
  // (1-q) q^n on 0..3 renormalized: 8/15, 4/15, 2/15, 1/15
  EXPECT_NEAR(g.probs[0], 8.0 / 15, 1e-15);
  EXPECT_NEAR(g.probs[3], 1.0 / 15, 1e-15);
  EXPECT_NEAR(g.truncated_mass, 1.0 / 16, 1e-15);
  EXPECT_NEAR(g.mean(), (4.0 + 4.0 + 3.0) / 15, 1e-14);

  auto gm = RoundDistribution::truncated_geometric_with_mean(10.0, 200);
  EXPECT_NEAR(gm.mean(), 10.0, 1e-9);
  EXPECT_NEAR(std::accumulate(gm.probs.begin(), gm.probs.end(), 0.0), 1.0, 1e-12);
  EXPECT_THROW(RoundDistribution::truncated_geometric_with_mean(10.0, 20), ValidationError);

  auto u = RoundDistribution::uniform(2, 4);
  EXPECT_NEAR(u.mean(), 3.0, 1e-15);
  EXPECT_EQ(u.probs[1], 0.0);
  EXPECT_THROW(RoundDistribution::uniform(4, 2), ValidationError);
}

TEST(RunVariable, IidMixesFidelityPowers) {
  Rng rng = make_rng(3, 7);
  auto t = TargetState::pure(haar_pure_state(2, rng));
  auto psi = DensityOperator::from_pure(haar_pure_state(2, rng));
  const double f = fidelity(t.leading(), psi);
  auto dist = RoundDistribution::uniform(0, 6);
  auto out = run_variable(VariableProtocol::canonical(t, dist), IidAttack{psi});
  double expect = 0.0;
  for (int n = 0; n <= 6; ++n) expect += std::pow(f, n) / 7.0;
  EXPECT_NEAR(out.accept_prob(), expect, 1e-12);
  EXPECT_THROW(run_variable(VariableProtocol::canonical(t, dist), EntangledAttack{psi}), ValidationError);
}

}  // namespace
}  // namespace qsv
