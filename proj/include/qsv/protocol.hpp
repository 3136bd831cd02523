#pragma once

// Cut-and-choose verification: N+1 registers arrive, one output round k is
// drawn from omega, the other N registers are measured with mu_k(0) and the
// output register is released on outcome 0. Every evaluation below is exact
// (averaged over all branches), not sampled.
//
// Rounds are indexed 0..N.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qsv/states.hpp"

namespace qsv {

/// mu(0) = M^{(x)n}: the same single-register accept operator on every
/// measured register. Accept probabilities factor into single-register terms,
/// so this works for any number of rounds.
class ProductMeasurement {
 public:
  explicit ProductMeasurement(BinaryMeasurement single, bool projects_onto_target = false)
      : single_(std::move(single)), projects_onto_target_(projects_onto_target) {}

  /// M = |phi><phi| for a pure target.
  static ProductMeasurement project_onto(const TargetState& target);
  /// M = projector onto the support of the target.
  static ProductMeasurement project_onto_support(const TargetState& target);

  const BinaryMeasurement& single() const { return single_; }
  bool projects_onto_target() const { return projects_onto_target_; }
  double accept_probability(const DensityOperator& rho) const { return single_.accept_probability(rho); }

 private:
  BinaryMeasurement single_;
  bool projects_onto_target_;
};

/// One accept operator on dim^N per output round.
using ExplicitMeasurements = std::vector<BinaryMeasurement>;
using MeasurementScheme = std::variant<ProductMeasurement, ExplicitMeasurements>;

struct EngineLimits {
  /// Largest tensor-space dimension the engine will build explicitly.
  std::size_t max_explicit_dim = 4096;
};

class FixedProtocol {
 public:
  FixedProtocol(TargetState target, int n_verify, std::vector<double> omega, MeasurementScheme measurements,
                EngineLimits limits = {});

  /// Uniform omega and projection onto phi^{(x)N}; requires a pure target.
  static FixedProtocol canonical(const TargetState& target, int n_verify, EngineLimits limits = {});
  /// Uniform omega and projection onto the support of phi on every measured register.
  static FixedProtocol support_projective(const TargetState& target, int n_verify, EngineLimits limits = {});

  const TargetState& target() const { return target_; }
  int n_verify() const { return n_verify_; }
  int rounds() const { return n_verify_ + 1; }
  const std::vector<double>& omega() const { return omega_; }
  const MeasurementScheme& measurements() const { return measurements_; }
  const EngineLimits& limits() const { return limits_; }

  /// Pure target, uniform omega and projection onto phi^{(x)N}.
  bool is_canonical(double tol = 1e-12) const;

 private:
  TargetState target_;
  int n_verify_;
  std::vector<double> omega_;
  MeasurementScheme measurements_;
  EngineLimits limits_;
};

struct Honest {};
struct IidAttack {
  DensityOperator state;
};
struct SeparableAttack {
  std::vector<DensityOperator> states;  // one per round
};
struct EntangledAttack {
  DensityOperator joint;  // on dim^(N+1), register 0 most significant
};
using Attack = std::variant<Honest, IidAttack, SeparableAttack, EntangledAttack>;

std::string attack_variant_name(const Attack& attack);

/// <mu_i(0), (x)_{j != i} psi_j>; `sent` holds the N measured registers in order.
double accept_prob(const FixedProtocol& protocol, int output_round, std::span<const DensityOperator> sent);

AbortingState run_fixed(const FixedProtocol& protocol, const Attack& attack);

/// Index map of the unitary that moves register `reg` of `n_regs` registers
/// (each of dimension `dim`) to the last position, keeping the others in order.
std::vector<Eigen::Index> register_rotation(Eigen::Index dim, int n_regs, int reg);

/// (1/(N+1)) sum_l B_l psi B_l^dagger.
ComplexMatrix symmetrize_registers(const ComplexMatrix& joint, Eigen::Index dim, int n_regs);

/// Number of verification rounds, truncated to {0..n_max} and renormalized.
struct RoundDistribution {
  std::vector<double> probs;   // probs[n] = Omega(n)
  double truncated_mass = 0.0;  // probability removed by the truncation
  std::string family;

  static RoundDistribution point_mass(int n);
  /// Omega(n) ∝ (1-q) q^n on {0..n_max}.
  static RoundDistribution truncated_geometric(double q, int n_max);
  /// Truncated geometric whose (truncated) mean equals `mean`.
  static RoundDistribution truncated_geometric_with_mean(double mean, int n_max);
  /// Uniform on {a..b}.
  static RoundDistribution uniform(int a, int b);

  int n_max() const { return static_cast<int>(probs.size()) - 1; }
  double mean() const;
};

class VariableProtocol {
 public:
  /// `explicit_family[n][i]` is mu_{n,i}(0) on dim^n; n = 0 uses 1x1 operators.
  using ExplicitFamily = std::vector<std::vector<BinaryMeasurement>>;
  using Scheme = std::variant<ProductMeasurement, ExplicitFamily>;

  VariableProtocol(TargetState target, RoundDistribution round_dist, std::vector<std::vector<double>> output_dists,
                   Scheme measurements, EngineLimits limits = {});

  /// Uniform omega_n and projection onto phi^{(x)n}; requires a pure target.
  static VariableProtocol canonical(const TargetState& target, RoundDistribution round_dist);
  static VariableProtocol support_projective(const TargetState& target, RoundDistribution round_dist);

  const TargetState& target() const { return target_; }
  const RoundDistribution& round_dist() const { return round_dist_; }
  const std::vector<std::vector<double>>& output_dists() const { return output_dists_; }
  const Scheme& measurements() const { return measurements_; }
  double expected_rounds() const { return round_dist_.mean(); }

 private:
  TargetState target_;
  RoundDistribution round_dist_;
  std::vector<std::vector<double>> output_dists_;
  Scheme measurements_;
  EngineLimits limits_;
};

/// Honest and IID attacks only.
AbortingState run_variable(const VariableProtocol& protocol, const Attack& attack);

}  // namespace qsv
