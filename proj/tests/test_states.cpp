#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "qsv/random.hpp"
#include "qsv/states.hpp"

namespace qsv {
namespace {

// Block operator X (+) c built by hand.
DensityOperator block(const ComplexMatrix& x, double c) {
  const auto d = x.rows();
  ComplexMatrix m = ComplexMatrix::Zero(d + 1, d + 1);
  m.topLeftCorner(d, d) = x;
  m(d, d) = c;
  return DensityOperator(m);
}

TEST(TargetState, SpectralData) {
  auto t = TargetState::diagonal({0.7, 0.3}, 3);
  EXPECT_EQ(t.dim(), 3);
  EXPECT_EQ(t.rank(), 2);
  EXPECT_FALSE(t.is_pure());
  EXPECT_NEAR(t.eta1(), 0.7, 1e-14);
  EXPECT_NEAR(t.spectrum()[1], 0.3, 1e-14);
  ComplexMatrix p = t.support_projector();
  EXPECT_NEAR((p * p - p).norm(), 0.0, 1e-13);
  EXPECT_NEAR(p.trace().real(), 2.0, 1e-13);
  EXPECT_EQ(t.complement().cols(), 1);
  EXPECT_NEAR((p * t.complement()).norm(), 0.0, 1e-13);
}

TEST(TargetState, PureAndBasis) {
  auto t = TargetState::basis(3, 1);
  EXPECT_TRUE(t.is_pure());
  EXPECT_NEAR(t.eta1(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(t.leading().amplitudes()(1)), 1.0, 1e-14);
  EXPECT_EQ(t.complement().cols(), 2);
  EXPECT_THROW(TargetState::diagonal({0.5, 0.4}, 2), ValidationError);
  EXPECT_THROW(TargetState::diagonal({0.5, 0.3, 0.2}, 2), ValidationError);
}

TEST(TargetState, FromDensityOrdersEigenvalues) {
  Rng rng = make_rng(11, 1);
  auto rho = random_density(4, rng, 3);
  auto t = TargetState::from_density(rho);
  EXPECT_EQ(t.rank(), 3);
  EXPECT_TRUE(std::is_sorted(t.spectrum().rbegin(), t.spectrum().rend()));
  ComplexMatrix rebuilt = ComplexMatrix::Zero(4, 4);
  for (std::size_t i = 0; i < t.spectrum().size(); ++i) rebuilt += t.spectrum()[i] * t.eigenvectors()[i].projector();
  EXPECT_NEAR((rebuilt - rho.matrix()).norm(), 0.0, 1e-10);
}

TEST(AbortingState, BlockEmbeddingLayout) {
  auto sigma = DensityOperator::basis(2, 1);
  AbortingState s(0.3, sigma);
  auto e = s.block_embedding();
  EXPECT_EQ(e.dim(), 3);
  EXPECT_NEAR(e.matrix()(1, 1).real(), 0.3, 1e-15);
  EXPECT_NEAR(e.matrix()(2, 2).real(), 0.7, 1e-15);
  EXPECT_THROW(AbortingState(1.2, sigma), ValidationError);
  auto r = AbortingState::rejected(2);
  EXPECT_EQ(r.accept_prob(), 0.0);
}

TEST(AbortingState, FromBlockAndMix) {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 0) = 0.2;
  x(1, 1) = 0.2;
  auto s = AbortingState::from_block(x);
  EXPECT_NEAR(s.accept_prob(), 0.4, 1e-15);
  EXPECT_NEAR(s.conditional().matrix()(0, 0).real(), 0.5, 1e-15);

  std::array<Branch, 2> branches{Branch{0.25, 1.0, DensityOperator::basis(2, 0)},
                                 Branch{0.75, 0.0, DensityOperator::basis(2, 1)}};
  auto m = mix(branches);
  EXPECT_NEAR(m.accept_prob(), 0.25, 1e-15);
  EXPECT_NEAR(fidelity(m.conditional(), DensityOperator::basis(2, 0)), 1.0, 1e-12);
}

TEST(AbortingState, IdealBlock) {
  auto t = TargetState::basis(2, 0);
  auto b = ideal_block(t, 0.6);
  EXPECT_NEAR(b.matrix()(0, 0).real(), 0.6, 1e-15);
  EXPECT_NEAR(b.matrix()(2, 2).real(), 0.4, 1e-15);
}

// Reference optimum by a dense scan of the ideal acceptance probability.
IdealOptimum scan(const AbortingState& out, const TargetState& t, bool standalone) {
  const auto rho = out.block_embedding();
  IdealOptimum best{0.0, standalone ? -1.0 : 2.0};
  for (int k = 0; k <= 20000; ++k) {
    const double p = k / 20000.0;
    const auto ideal = block(p * t.rho().matrix(), 1.0 - p);
    const double v = standalone ? fidelity(rho, ideal) : trace_distance(rho, ideal);
    if (standalone ? v > best.value : v < best.value) best = {p, v};
  }
  return best;
}

TEST(Objectives, ClosedFormsMatchScan) {
  Rng rng = make_rng(11, 2);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int s = 0; s < 6; ++s) {
    auto t = TargetState::pure(haar_pure_state(2, rng));
    AbortingState out(u(rng), random_density(2, rng));
    const double pf = out.accept_prob() * fidelity(t.rho(), out.conditional());

    auto sd = standalone_fidelity_dishonest(out, t);
    EXPECT_NEAR(sd.value, pf + 1.0 - out.accept_prob(), 1e-12);
    EXPECT_NEAR(sd.best_p, pf / sd.value, 1e-12);
    auto ref = scan(out, t, true);
    EXPECT_NEAR(sd.value, ref.value, 1e-6);
    EXPECT_NEAR(standalone_fidelity_honest(out, t), pf, 1e-12);

    auto cd = composable_distance_dishonest(out, t);
    EXPECT_NEAR(cd.value, out.accept_prob() * trace_distance(out.conditional(), t.rho()), 1e-12);
    EXPECT_NEAR(cd.best_p, out.accept_prob(), 1e-12);
    auto cref = scan(out, t, false);
    EXPECT_NEAR(cd.value, cref.value, 1e-4);
    EXPECT_LE(cd.value, cref.value + 1e-12);
  }
}

TEST(Objectives, HonestComposable) {
  auto t = TargetState::basis(2, 0);
  AbortingState out(0.8, DensityOperator::basis(2, 0));
  // (1/2)||0.8 phi - phi||_1 + (1/2)(0.2) = 0.2
  EXPECT_NEAR(composable_distance_honest(out, t), 0.2, 1e-14);
  AbortingState perfect(1.0, DensityOperator::basis(2, 0));
  EXPECT_NEAR(composable_distance_honest(perfect, t), 0.0, 1e-14);
  EXPECT_NEAR(standalone_fidelity_honest(perfect, t), 1.0, 1e-14);
}

}  // namespace
}  // namespace qsv
