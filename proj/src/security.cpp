#include "qsv/security.hpp"

#include <iostream>

#include "qsv/attacks.hpp"
#include "qsv/bounds.hpp"

namespace qsv {
namespace {

constexpr double kClampLogThreshold = 1e-9;

double clamp_unit(double raw, const char* what) {
  const double clamped = std::clamp(raw, 0.0, 1.0);
  if (std::abs(clamped - raw) > kClampLogThreshold) {
    std::clog << "qsv: clamped " << what << " = " << raw << " into [0,1]\n";
  }
  return clamped;
}

SecurityReport finish(Definition def, double eps_h, double eps_d, double best_p, double n, double loose,
                      double tight) {
  SecurityReport r{def, clamp_unit(eps_h, "eps_h"), clamp_unit(eps_d, "eps_d"), best_p, n, loose, tight, 0.0};
  r.slack = r.eps_sum() - r.bound;
  return r;
}

SecurityReport standalone_from(const AbortingState& honest, const AbortingState& dishonest,
                               const TargetState& target, double n, double loose, double tight) {
  const double eps_h = 1.0 - standalone_fidelity_honest(honest, target);
  const auto opt = standalone_fidelity_dishonest(dishonest, target);
  return finish(Definition::standalone, eps_h, 1.0 - opt.value, opt.best_p, n, loose, tight);
}

SecurityReport composable_from(const AbortingState& honest, const AbortingState& dishonest,
                               const TargetState& target, double n, double bound) {
  const double eps_h = composable_distance_honest(honest, target);
  const auto opt = composable_distance_dishonest(dishonest, target);
  return finish(Definition::composable, eps_h, opt.value, opt.best_p, n, bound, bound);
}

}  // namespace

std::string_view to_string(Definition d) { return d == Definition::standalone ? "standalone" : "composable"; }

std::optional<Definition> parse_definition(std::string_view name) {
  if (name == "standalone" || name == "stand-alone") return Definition::standalone;
  if (name == "composable") return Definition::composable;
  return std::nullopt;
}

SecurityReport evaluate_standalone(const FixedProtocol& protocol, const Attack& attack) {
  const auto b = standalone_bound(protocol.n_verify());
  return standalone_from(run_fixed(protocol, Honest{}), run_fixed(protocol, attack), protocol.target(),
                         protocol.n_verify(), b.loose, b.tight);
}

SecurityReport evaluate_composable(const FixedProtocol& protocol, const Attack& attack) {
  const double b = composable_bound(protocol.n_verify(), protocol.target().eta1());
  return composable_from(run_fixed(protocol, Honest{}), run_fixed(protocol, attack), protocol.target(),
                         protocol.n_verify(), b);
}

SecurityReport evaluate(Definition definition, const FixedProtocol& protocol, const Attack& attack) {
  return definition == Definition::standalone ? evaluate_standalone(protocol, attack)
                                              : evaluate_composable(protocol, attack);
}

SecurityReport evaluate_standalone(const VariableProtocol& protocol, const Attack& attack) {
  const double n = protocol.expected_rounds();
  const auto b = variable_round_bounds(n, protocol.target().eta1());
  return standalone_from(run_variable(protocol, Honest{}), run_variable(protocol, attack), protocol.target(), n,
                         b.standalone, 4.0 / (27.0 * n));
}

SecurityReport evaluate_composable(const VariableProtocol& protocol, const Attack& attack) {
  const double n = protocol.expected_rounds();
  const auto b = variable_round_bounds(n, protocol.target().eta1());
  return composable_from(run_variable(protocol, Honest{}), run_variable(protocol, attack), protocol.target(), n,
                         b.composable);
}

SecurityReport evaluate(Definition definition, const VariableProtocol& protocol, const Attack& attack) {
  return definition == Definition::standalone ? evaluate_standalone(protocol, attack)
                                              : evaluate_composable(protocol, attack);
}

namespace {

std::vector<double> separable_accepts(const FixedProtocol& protocol, const SeparableAttack& attack) {
  if (static_cast<int>(attack.states.size()) != protocol.rounds()) {
    throw ValidationError("separable attack needs N+1 states");
  }
  std::vector<double> out;
  std::vector<DensityOperator> others;
  for (int i = 0; i < protocol.rounds(); ++i) {
    others.clear();
    for (int j = 0; j < protocol.rounds(); ++j) {
      if (j != i) others.push_back(attack.states[static_cast<std::size_t>(j)]);
    }
    out.push_back(accept_prob(protocol, i, others));
  }
  return out;
}

}  // namespace

double separable_standalone_eps_d(const FixedProtocol& protocol, const SeparableAttack& attack) {
  if (!protocol.target().is_pure()) throw ValidationError("separable_standalone_eps_d: target must be pure");
  const auto p_d = separable_accepts(protocol, attack);
  double total = 0.0;
  for (std::size_t i = 0; i < p_d.size(); ++i) {
    total += protocol.omega()[i] * p_d[i] * (1.0 - fidelity(protocol.target().leading(), attack.states[i]));
  }
  return total;
}

double separable_composable_eps_d(const FixedProtocol& protocol, const SeparableAttack& attack) {
  const auto p_d = separable_accepts(protocol, attack);
  const auto& phi = protocol.target().rho().matrix();
  ComplexMatrix sum = ComplexMatrix::Zero(phi.rows(), phi.cols());
  for (std::size_t i = 0; i < p_d.size(); ++i) {
    sum += (protocol.omega()[i] * p_d[i]) * (attack.states[i].matrix() - phi);
  }
  return 0.5 * trace_norm_hermitian(sum);
}

std::vector<CrossoverRow> crossover_scan(int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) throw ValidationError("crossover_scan: empty or invalid range");
  const TargetState target = TargetState::basis(2, 0);
  std::vector<CrossoverRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    const auto protocol = FixedProtocol::canonical(target, n);
    const auto naive = evaluate_composable(protocol, naive_attack(protocol).resolved);
    const auto iid = evaluate_composable(protocol, iid_composable_attack(target, n).resolved);
    rows.push_back({n, naive.eps_sum(), iid.eps_sum(), naive.bound, iid.eps_sum() > naive.eps_sum()});
  }
  return rows;
}

}  // namespace qsv
