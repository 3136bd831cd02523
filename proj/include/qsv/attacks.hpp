#pragma once

// Named attack constructions against cut-and-choose verification.

#include <optional>
#include <string_view>

#include "qsv/protocol.hpp"

namespace qsv {

enum class AttackKind { naive_orthogonal, iid_standalone, iid_composable };

std::string_view to_string(AttackKind kind);
std::optional<AttackKind> parse_attack_kind(std::string_view name);

struct AttackRecipe {
  AttackKind kind;
  std::optional<double> alpha;     // i.i.d. attacks
  std::optional<int> output_round;  // naive attack: the guessed output round
  Attack resolved;
};

inline constexpr double kStandaloneAlpha = 4.0 / 9.0;
inline constexpr double kComposableAlpha = 0.5;

/// Smallest index attaining max omega.
int most_likely_round(const std::vector<double>& omega);

/// phi on every round except an orthogonal state on the most likely output round.
AttackRecipe naive_attack(const FixedProtocol& protocol);

/// N+1 copies of a pure psi with F(phi, psi) = 1 - alpha/rounds. `rounds` is
/// the (possibly expected) number of verification rounds.
AttackRecipe iid_standalone_attack(const TargetState& target, double rounds, double alpha = kStandaloneAlpha);

/// N+1 copies of psi = eta_1 |chi><chi| + sum_{i>=2} eta_i |phi_i><phi_i| with
/// |<phi_1|chi>|^2 = 1 - alpha^2/(eta_1 rounds), chi rotated towards the
/// first vector completing the target's eigenbasis.
AttackRecipe iid_composable_attack(const TargetState& target, double rounds, double alpha = kComposableAlpha);

}  // namespace qsv
