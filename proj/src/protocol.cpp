#include "qsv/protocol.hpp"

#include <cmath>
#include <numeric>

namespace qsv {
namespace {

void require_probability_vector(const std::vector<double>& p, const char* what, double tol = 1e-10) {
  if (p.empty()) throw ValidationError(std::string(what) + ": empty distribution");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw ValidationError(std::string(what) + ": negative probability");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError(std::string(what) + ": probabilities sum to " + std::to_string(sum));
  }
}

std::size_t checked_power(Eigen::Index dim, int k, std::size_t cap, const char* what) {
  std::size_t out = 1;
  for (int i = 0; i < k; ++i) {
    out *= static_cast<std::size_t>(dim);
    if (out > cap) {
      throw SizeCapError(std::string(what) + ": tensor dimension exceeds cap " + std::to_string(cap));
    }
  }
  return out;
}

ComplexMatrix tensor_all(std::span<const DensityOperator> states) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& s : states) out = ComplexMatrix(Eigen::kroneckerProduct(out, s.matrix()));
  return out;
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

std::vector<double> uniform(int n) { return std::vector<double>(static_cast<std::size_t>(n), 1.0 / n); }

}  // namespace

ProductMeasurement ProductMeasurement::project_onto(const TargetState& target) {
  if (!target.is_pure()) throw ValidationError("project_onto: target must be pure");
  return ProductMeasurement(BinaryMeasurement::projector_onto(target.leading()), true);
}

ProductMeasurement ProductMeasurement::project_onto_support(const TargetState& target) {
  return ProductMeasurement(BinaryMeasurement(target.support_projector()), target.is_pure());
}

FixedProtocol::FixedProtocol(TargetState target, int n_verify, std::vector<double> omega,
                             MeasurementScheme measurements, EngineLimits limits)
    : target_(std::move(target)),
      n_verify_(n_verify),
      omega_(std::move(omega)),
      measurements_(std::move(measurements)),
      limits_(limits) {
  if (n_verify_ < 1) throw ValidationError("FixedProtocol: need at least one verification round");
  if (static_cast<int>(omega_.size()) != rounds()) {
    throw ValidationError("FixedProtocol: omega must have N+1 entries");
  }
  require_probability_vector(omega_, "FixedProtocol omega");
  if (const auto* product = std::get_if<ProductMeasurement>(&measurements_)) {
    detail::require_same_dim(product->single().dim(), target_.dim(), "FixedProtocol measurement");
  } else {
    const auto& family = std::get<ExplicitMeasurements>(measurements_);
    if (static_cast<int>(family.size()) != rounds()) {
      throw ValidationError("FixedProtocol: need one explicit measurement per round");
    }
    const auto expected = static_cast<Eigen::Index>(checked_power(target_.dim(), n_verify_, limits_.max_explicit_dim,
                                                                  "FixedProtocol"));
    for (const auto& m : family) detail::require_same_dim(m.dim(), expected, "FixedProtocol measurement");
  }
}

FixedProtocol FixedProtocol::canonical(const TargetState& target, int n_verify, EngineLimits limits) {
  if (!target.is_pure()) throw ValidationError("canonical protocol requires a pure target");
  return FixedProtocol(target, n_verify, uniform(n_verify + 1), ProductMeasurement::project_onto(target), limits);
}

FixedProtocol FixedProtocol::support_projective(const TargetState& target, int n_verify, EngineLimits limits) {
  return FixedProtocol(target, n_verify, uniform(n_verify + 1), ProductMeasurement::project_onto_support(target),
                       limits);
}

bool FixedProtocol::is_canonical(double tol) const {
  const auto* product = std::get_if<ProductMeasurement>(&measurements_);
  if (product == nullptr || !product->projects_onto_target() || !target_.is_pure()) return false;
  const double u = 1.0 / rounds();
  return std::all_of(omega_.begin(), omega_.end(), [&](double w) { return std::abs(w - u) <= tol; });
}

std::string attack_variant_name(const Attack& attack) {
  switch (attack.index()) {
    case 0: return "honest";
    case 1: return "iid";
    case 2: return "separable";
    default: return "entangled";
  }
}

double accept_prob(const FixedProtocol& protocol, int output_round, std::span<const DensityOperator> sent) {
  if (output_round < 0 || output_round >= protocol.rounds()) {
    throw ValidationError("accept_prob: output round out of range");
  }
  if (static_cast<int>(sent.size()) != protocol.n_verify()) {
    throw ValidationError("accept_prob: expected N measured registers");
  }
  for (const auto& s : sent) detail::require_same_dim(s.dim(), protocol.target().dim(), "accept_prob");
  if (const auto* product = std::get_if<ProductMeasurement>(&protocol.measurements())) {
    double p = 1.0;
    for (const auto& s : sent) p *= product->accept_probability(s);
    return std::clamp(p, 0.0, 1.0);
  }
  const auto& family = std::get<ExplicitMeasurements>(protocol.measurements());
  checked_power(protocol.target().dim(), protocol.n_verify(), protocol.limits().max_explicit_dim, "accept_prob");
  return std::clamp(trace_product(family[static_cast<std::size_t>(output_round)].accept_operator(), tensor_all(sent)),
                    0.0, 1.0);
}

namespace {

/// Total acceptance when every measured register carries `state`.
double iid_accept(const FixedProtocol& protocol, const DensityOperator& state) {
  const int n = protocol.n_verify();
  if (const auto* product = std::get_if<ProductMeasurement>(&protocol.measurements())) {
    return std::clamp(std::pow(product->accept_probability(state), n), 0.0, 1.0);
  }
  checked_power(state.dim(), n, protocol.limits().max_explicit_dim, "run_fixed");
  const ComplexMatrix copies = kron_power(state.matrix(), n);
  const auto& family = std::get<ExplicitMeasurements>(protocol.measurements());
  double accept = 0.0;
  for (int i = 0; i < protocol.rounds(); ++i) {
    accept += protocol.omega()[static_cast<std::size_t>(i)] *
              trace_product(family[static_cast<std::size_t>(i)].accept_operator(), copies);
  }
  return std::clamp(accept, 0.0, 1.0);
}

AbortingState run_separable(const FixedProtocol& protocol, const SeparableAttack& attack) {
  const auto& states = attack.states;
  if (static_cast<int>(states.size()) != protocol.rounds()) {
    throw ValidationError("run_fixed: separable attack needs N+1 states");
  }
  for (const auto& s : states) detail::require_same_dim(s.dim(), protocol.target().dim(), "run_fixed");
  std::vector<Branch> branches;
  branches.reserve(states.size());
  std::vector<DensityOperator> others;
  others.reserve(states.size());
  for (int i = 0; i < protocol.rounds(); ++i) {
    others.clear();
    for (int j = 0; j < protocol.rounds(); ++j) {
      if (j != i) others.push_back(states[static_cast<std::size_t>(j)]);
    }
    branches.push_back({protocol.omega()[static_cast<std::size_t>(i)], accept_prob(protocol, i, others),
                        states[static_cast<std::size_t>(i)]});
  }
  return mix(branches);
}

AbortingState run_entangled(const FixedProtocol& protocol, const EntangledAttack& attack) {
  if (!protocol.is_canonical()) {
    throw ValidationError("run_fixed: entangled attacks are only evaluated on the canonical protocol");
  }
  const Eigen::Index d = protocol.target().dim();
  const int regs = protocol.rounds();
  const auto joint_dim =
      static_cast<Eigen::Index>(checked_power(d, regs, protocol.limits().max_explicit_dim, "run_fixed"));
  detail::require_same_dim(attack.joint.dim(), joint_dim, "run_fixed entangled attack");

  // Rotate the output register to the last slot for every choice of output
  // round, then project the first N registers onto phi.
  const ComplexMatrix symmetrized = symmetrize_registers(attack.joint.matrix(), d, regs);
  const ComplexMatrix projector_rows = Eigen::kroneckerProduct(
      kron_power(protocol.target().leading().amplitudes(), protocol.n_verify()), ComplexMatrix::Identity(d, d));
  const ComplexMatrix accepted = projector_rows.adjoint() * symmetrized * projector_rows;
  return AbortingState::from_block(accepted);
}

}  // namespace

AbortingState run_fixed(const FixedProtocol& protocol, const Attack& attack) {
  const auto& target = protocol.target();
  if (std::holds_alternative<Honest>(attack)) {
    return AbortingState(iid_accept(protocol, target.rho()), target.rho());
  }
  if (const auto* iid = std::get_if<IidAttack>(&attack)) {
    detail::require_same_dim(iid->state.dim(), target.dim(), "run_fixed");
    return AbortingState(iid_accept(protocol, iid->state), iid->state);
  }
  if (const auto* sep = std::get_if<SeparableAttack>(&attack)) return run_separable(protocol, *sep);
  return run_entangled(protocol, std::get<EntangledAttack>(attack));
}

std::vector<Eigen::Index> register_rotation(Eigen::Index dim, int n_regs, int reg) {
  if (reg < 0 || reg >= n_regs) throw ValidationError("register_rotation: register out of range");
  Eigen::Index total = 1;
  for (int i = 0; i < n_regs; ++i) total *= dim;
  std::vector<Eigen::Index> map(static_cast<std::size_t>(total));
  std::vector<Eigen::Index> digits(static_cast<std::size_t>(n_regs));
  for (Eigen::Index x = 0; x < total; ++x) {
    Eigen::Index rest = x;
    for (int k = n_regs - 1; k >= 0; --k) {
      digits[static_cast<std::size_t>(k)] = rest % dim;
      rest /= dim;
    }
    Eigen::Index y = 0;
    for (int k = 0; k < n_regs; ++k) {
      if (k != reg) y = y * dim + digits[static_cast<std::size_t>(k)];
    }
    y = y * dim + digits[static_cast<std::size_t>(reg)];
    map[static_cast<std::size_t>(x)] = y;
  }
  return map;
}

ComplexMatrix symmetrize_registers(const ComplexMatrix& joint, Eigen::Index dim, int n_regs) {
  const Eigen::Index total = joint.rows();
  ComplexMatrix out = ComplexMatrix::Zero(total, total);
  for (int reg = 0; reg < n_regs; ++reg) {
    const auto map = register_rotation(dim, n_regs, reg);
    detail::require_same_dim(static_cast<Eigen::Index>(map.size()), total, "symmetrize_registers");
    for (Eigen::Index c = 0; c < total; ++c) {
      const Eigen::Index mc = map[static_cast<std::size_t>(c)];
      for (Eigen::Index r = 0; r < total; ++r) out(map[static_cast<std::size_t>(r)], mc) += joint(r, c);
    }
  }
  return out / static_cast<double>(n_regs);
}

RoundDistribution RoundDistribution::point_mass(int n) {
  if (n < 0) throw ValidationError("point_mass: negative round count");
  RoundDistribution out;
  out.probs.assign(static_cast<std::size_t>(n) + 1, 0.0);
  out.probs.back() = 1.0;
  out.family = "point";
  return out;
}

RoundDistribution RoundDistribution::truncated_geometric(double q, int n_max) {
  if (!(q >= 0.0 && q < 1.0) || n_max < 0) throw ValidationError("truncated_geometric: need 0 <= q < 1, n_max >= 0");
  RoundDistribution out;
  out.family = "geometric";
  out.probs.resize(static_cast<std::size_t>(n_max) + 1);
  double w = 1.0 - q;
  double kept = 0.0;
  for (auto& p : out.probs) {
    p = w;
    kept += w;
    w *= q;
  }
  out.truncated_mass = std::pow(q, n_max + 1);
  for (auto& p : out.probs) p /= kept;
  return out;
}

RoundDistribution RoundDistribution::truncated_geometric_with_mean(double mean, int n_max) {
  if (!(mean > 0.0) || !(mean < 0.5 * n_max)) {
    throw ValidationError("truncated_geometric_with_mean: need 0 < mean < n_max/2");
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (truncated_geometric(mid, n_max).mean() < mean) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return truncated_geometric(0.5 * (lo + hi), n_max);
}

RoundDistribution RoundDistribution::uniform(int a, int b) {
  if (a < 0 || b < a) throw ValidationError("uniform: need 0 <= a <= b");
  RoundDistribution out;
  out.family = "uniform";
  out.probs.assign(static_cast<std::size_t>(b) + 1, 0.0);
  for (int n = a; n <= b; ++n) out.probs[static_cast<std::size_t>(n)] = 1.0 / (b - a + 1);
  return out;
}

double RoundDistribution::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) m += static_cast<double>(n) * probs[n];
  return m;
}

VariableProtocol::VariableProtocol(TargetState target, RoundDistribution round_dist,
                                   std::vector<std::vector<double>> output_dists, Scheme measurements,
                                   EngineLimits limits)
    : target_(std::move(target)),
      round_dist_(std::move(round_dist)),
      output_dists_(std::move(output_dists)),
      measurements_(std::move(measurements)),
      limits_(limits) {
  require_probability_vector(round_dist_.probs, "VariableProtocol round distribution");
  if (!(round_dist_.mean() > 0.0)) throw ValidationError("VariableProtocol: expected round count must be positive");
  if (output_dists_.size() != round_dist_.probs.size()) {
    throw ValidationError("VariableProtocol: need one output distribution per round count");
  }
  for (std::size_t n = 0; n < output_dists_.size(); ++n) {
    if (output_dists_[n].size() != n + 1) {
      throw ValidationError("VariableProtocol: omega_n must have n+1 entries");
    }
    require_probability_vector(output_dists_[n], "VariableProtocol omega_n");
  }
  if (const auto* product = std::get_if<ProductMeasurement>(&measurements_)) {
    detail::require_same_dim(product->single().dim(), target_.dim(), "VariableProtocol measurement");
  } else {
    const auto& family = std::get<ExplicitFamily>(measurements_);
    if (family.size() != round_dist_.probs.size()) {
      throw ValidationError("VariableProtocol: explicit family must cover every round count");
    }
    for (std::size_t n = 0; n < family.size(); ++n) {
      if (family[n].size() != n + 1) throw ValidationError("VariableProtocol: need n+1 measurements for n rounds");
      const auto expected = static_cast<Eigen::Index>(
          checked_power(target_.dim(), static_cast<int>(n), limits_.max_explicit_dim, "VariableProtocol"));
      for (const auto& m : family[n]) detail::require_same_dim(m.dim(), expected, "VariableProtocol measurement");
    }
  }
}

namespace {

std::vector<std::vector<double>> uniform_outputs(std::size_t count) {
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) out.push_back(uniform(static_cast<int>(n) + 1));
  return out;
}

}  // namespace

VariableProtocol VariableProtocol::canonical(const TargetState& target, RoundDistribution round_dist) {
  auto outputs = uniform_outputs(round_dist.probs.size());
  return VariableProtocol(target, std::move(round_dist), std::move(outputs), ProductMeasurement::project_onto(target));
}

VariableProtocol VariableProtocol::support_projective(const TargetState& target, RoundDistribution round_dist) {
  auto outputs = uniform_outputs(round_dist.probs.size());
  return VariableProtocol(target, std::move(round_dist), std::move(outputs),
                          ProductMeasurement::project_onto_support(target));
}

AbortingState run_variable(const VariableProtocol& protocol, const Attack& attack) {
  const DensityOperator* sent = nullptr;
  if (std::holds_alternative<Honest>(attack)) {
    sent = &protocol.target().rho();
  } else if (const auto* iid = std::get_if<IidAttack>(&attack)) {
    sent = &iid->state;
  } else {
    throw ValidationError("run_variable: only honest and i.i.d. attacks are supported");
  }
  detail::require_same_dim(sent->dim(), protocol.target().dim(), "run_variable");

  const auto& omega_n = protocol.output_dists();
  const auto& probs = protocol.round_dist().probs;
  double accept = 0.0;
  if (const auto* product = std::get_if<ProductMeasurement>(&protocol.measurements())) {
    const double single = product->accept_probability(*sent);
    for (std::size_t n = 0; n < probs.size(); ++n) accept += probs[n] * std::pow(single, static_cast<double>(n));
  } else {
    const auto& family = std::get<VariableProtocol::ExplicitFamily>(protocol.measurements());
    for (std::size_t n = 0; n < probs.size(); ++n) {
      if (probs[n] == 0.0) continue;
      const ComplexMatrix copies = kron_power(sent->matrix(), static_cast<int>(n));
      double branch = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        branch += omega_n[n][i] * trace_product(family[n][i].accept_operator(), copies);
      }
      accept += probs[n] * branch;
    }
  }
  return AbortingState(std::clamp(accept, 0.0, 1.0), *sent);
}

}  // namespace qsv
