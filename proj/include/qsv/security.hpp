#pragma once

// (eps_H, eps_D) under the fidelity-based (stand-alone) and trace-distance
// (composable) security definitions.

#include <optional>
#include <string_view>
#include <vector>

#include "qsv/protocol.hpp"

namespace qsv {

enum class Definition { standalone, composable };

std::string_view to_string(Definition d);
std::optional<Definition> parse_definition(std::string_view name);

struct SecurityReport {
  Definition definition;
  double eps_h;
  double eps_d;
  double best_p;       // optimizer over the ideal acceptance probability
  double n_verify;     // N, or E[n] for variable-round protocols
  double bound_loose;  // published constant (1/7N stand-alone)
  double bound;        // tightest bound of the definition (4/27N stand-alone)
  double slack;        // eps_h + eps_d - bound

  double eps_sum() const { return eps_h + eps_d; }
};

SecurityReport evaluate_standalone(const FixedProtocol& protocol, const Attack& attack);
SecurityReport evaluate_composable(const FixedProtocol& protocol, const Attack& attack);
SecurityReport evaluate(Definition definition, const FixedProtocol& protocol, const Attack& attack);

SecurityReport evaluate_standalone(const VariableProtocol& protocol, const Attack& attack);
SecurityReport evaluate_composable(const VariableProtocol& protocol, const Attack& attack);
SecurityReport evaluate(Definition definition, const VariableProtocol& protocol, const Attack& attack);

/// sum_i omega(i) p_D(i) (1 - F(psi_i, phi)) for a pure target.
double separable_standalone_eps_d(const FixedProtocol& protocol, const SeparableAttack& attack);
/// (1/2) || sum_i omega(i) p_D(i) (psi_i - phi) ||_1.
double separable_composable_eps_d(const FixedProtocol& protocol, const SeparableAttack& attack);

struct CrossoverRow {
  int n;
  double naive_sum;
  double iid_sum;
  double composable_bound;
  bool iid_exceeds_naive;
};

/// Composable eps sums of the naive and i.i.d. attacks on the canonical qubit protocol.
std::vector<CrossoverRow> crossover_scan(int n_min, int n_max);

}  // namespace qsv
