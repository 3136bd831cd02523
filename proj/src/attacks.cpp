#include "qsv/attacks.hpp"

#include <cmath>

namespace qsv {

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::naive_orthogonal: return "naive";
    case AttackKind::iid_standalone: return "iid_standalone";
    case AttackKind::iid_composable: return "iid_composable";
  }
  return "unknown";
}

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  if (name == "naive" || name == "naive_orthogonal") return AttackKind::naive_orthogonal;
  if (name == "iid_standalone" || name == "iid-standalone") return AttackKind::iid_standalone;
  if (name == "iid_composable" || name == "iid-composable") return AttackKind::iid_composable;
  return std::nullopt;
}

int most_likely_round(const std::vector<double>& omega) {
  if (omega.empty()) throw ValidationError("most_likely_round: empty distribution");
  int best = 0;
  for (int i = 1; i < static_cast<int>(omega.size()); ++i) {
    if (omega[static_cast<std::size_t>(i)] > omega[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

AttackRecipe naive_attack(const FixedProtocol& protocol) {
  const auto& target = protocol.target();
  if (!target.is_pure()) throw ValidationError("naive_attack: target must be pure");
  const int ell = most_likely_round(protocol.omega());
  std::vector<DensityOperator> states(static_cast<std::size_t>(protocol.rounds()), target.rho());
  states[static_cast<std::size_t>(ell)] = DensityOperator::from_pure(orthogonal_pure_state(target.leading()));
  return {AttackKind::naive_orthogonal, std::nullopt, ell, SeparableAttack{std::move(states)}};
}

AttackRecipe iid_standalone_attack(const TargetState& target, double rounds, double alpha) {
  if (!target.is_pure()) throw ValidationError("iid_standalone_attack: target must be pure");
  if (!(rounds > 0.0)) throw ValidationError("iid_standalone_attack: rounds must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("iid_standalone_attack: need 0 < alpha <= 1");
  const double tau = alpha / rounds;
  if (tau > 1.0) throw ValidationError("iid_standalone_attack: alpha / N exceeds 1");
  const PureState& phi = target.leading();
  const PureState psi = rotate_overlap(phi, orthogonal_pure_state(phi), 1.0 - tau);
  return {AttackKind::iid_standalone, alpha, std::nullopt, IidAttack{DensityOperator::from_pure(psi)}};
}

AttackRecipe iid_composable_attack(const TargetState& target, double rounds, double alpha) {
  if (!(rounds > 0.0)) throw ValidationError("iid_composable_attack: rounds must be positive");
  if (!(alpha > 0.0)) throw ValidationError("iid_composable_attack: alpha must be positive");
  if (target.complement().cols() == 0) {
    throw ValidationError("iid_composable_attack: target has full rank, no direction outside its support");
  }
  const double eta1 = target.eta1();
  const double tau_sq = alpha * alpha / (eta1 * rounds);
  if (tau_sq > 1.0) throw ValidationError("iid_composable_attack: alpha^2 / (eta_1 N) exceeds 1");

  const PureState direction = PureState::normalized(target.complement().col(0));
  const PureState chi = rotate_overlap(target.leading(), direction, 1.0 - tau_sq);
  ComplexMatrix psi = eta1 * chi.projector();
  for (std::size_t i = 1; i < target.eigenvectors().size(); ++i) {
    psi += target.spectrum()[i] * target.eigenvectors()[i].projector();
  }
  // The spectrum may miss the trace by the rank cut-off; renormalize.
  psi /= psi.trace().real();
  return {AttackKind::iid_composable, alpha, std::nullopt, IidAttack{DensityOperator(psi)}};
}

}  // namespace qsv
