// Acceptance criteria 1-9: one PASS/FAIL line each, nonzero exit on failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qsv/attacks.hpp"
#include "qsv/bounds.hpp"
#include "qsv/cli/commands.hpp"
#include "qsv/oracle.hpp"
#include "qsv/random.hpp"
#include "qsv/security.hpp"

namespace {

using namespace qsv;

struct Outcome {
  bool passed = true;
  double worst = 0.0;  // worst violation (or worst deviation), for the report line
  std::string detail;

  void require(bool ok, double violation, const std::string& what) {
    worst = std::max(worst, violation);
    if (!ok && passed) {
      passed = false;
      detail = what;
    }
  }
};

constexpr std::uint64_t kSeed = 20240601;

// Honest eps_h = 0 and naive eps_d = 1/(N+1) on random pure targets.
Outcome canonical_exactness() {
  Outcome o;
  Rng rng = make_rng(kSeed, 1);
  for (Eigen::Index d : {2, 3}) {
    for (int n = 1; n <= 32; ++n) {
      const auto target = TargetState::pure(haar_pure_state(d, rng));
      const auto p = FixedProtocol::canonical(target, n);
      const auto naive = naive_attack(p).resolved;
      const std::string at = "d=" + std::to_string(d) + " N=" + std::to_string(n);
      for (auto def : {Definition::standalone, Definition::composable}) {
        const double eh = evaluate(def, p, Honest{}).eps_h;
        o.require(std::abs(eh) <= 1e-12, std::abs(eh), at + " eps_h");
        const double ed = evaluate(def, p, naive).eps_d;
        const double dev = std::abs(ed - 1.0 / (n + 1));
        o.require(dev <= 1e-10, dev, at + " naive eps_d");
      }
    }
  }
  return o;
}

Outcome entangled_ceiling() {
  Outcome o;
  for (int n = 1; n <= 3; ++n) {
    const auto r = entangled_attack_sweep(n, 2, 100, kSeed + n);
    o.require(r.passed && r.samples == 100, r.worst_violation, "N=" + std::to_string(n) + " " + r.witness);
  }
  return o;
}

Outcome standalone_achievement() {
  Outcome o;
  const auto target = TargetState::basis(2, 0);
  for (int n = 1; n <= 64; ++n) {
    const auto p = FixedProtocol::canonical(target, n);
    const auto r = evaluate_standalone(p, iid_standalone_attack(target, n, 4.0 / 9.0).resolved);
    const double tau = 4.0 / (9.0 * n);
    const double closed = std::pow(1.0 - tau, n) * tau;
    const double dev = std::abs(r.eps_sum() - closed);
    o.require(dev <= 1e-9, dev, "N=" + std::to_string(n) + " closed form");
    const double bound = 4.0 / (27.0 * n);
    o.require(r.eps_sum() >= bound, std::max(0.0, bound - r.eps_sum()), "N=" + std::to_string(n) + " below 4/(27N)");
  }
  return o;
}

Outcome composable_achievement() {
  Outcome o;
  Rng rng = make_rng(kSeed, 4);
  const std::vector<std::pair<TargetState, FixedProtocol (*)(const TargetState&, int, EngineLimits)>> cases = {
      {TargetState::pure(haar_pure_state(2, rng)), &FixedProtocol::canonical},
      {TargetState::diagonal({0.7, 0.3}, 3), &FixedProtocol::support_projective}};
  for (const auto& [target, make] : cases) {
    const double eta1 = target.eta1();
    for (int n = 1; n <= 64; ++n) {
      if (0.25 > eta1 * n) continue;  // alpha^2 / (eta1 N) must not exceed 1
      const auto p = make(target, n, {});
      const auto recipe = iid_composable_attack(target, n, 0.5);
      const auto r = evaluate_composable(p, recipe.resolved);
      const double bound = std::sqrt(eta1) / (4.0 * std::sqrt(n));
      const std::string at = "eta1=" + std::to_string(eta1) + " N=" + std::to_string(n);
      o.require(r.eps_sum() >= bound - 1e-12, std::max(0.0, bound - r.eps_sum()), at + " below bound");
      if (n <= 4) {
        const auto& psi = std::get<IidAttack>(recipe.resolved).state;
        const double overlap = 1.0 - 0.25 / (eta1 * n);
        const double exact = exact_multicopy_distance(target.rho(), psi, n);
        const double ceiling = std::sqrt(1.0 - std::pow(overlap, eta1 * n));
        o.require(exact <= ceiling + 1e-9, std::max(0.0, exact - ceiling), at + " N-copy bound");
      }
    }
  }
  return o;
}

Outcome crossover() {
  Outcome o;
  for (const auto& row : crossover_scan(17, 32)) {
    const double naive = 1.0 / (row.n + 1);
    const double dev = std::abs(row.naive_sum - naive);
    o.require(dev <= 1e-10, dev, "N=" + std::to_string(row.n) + " naive sum");
    o.require(row.iid_sum > naive && row.iid_exceeds_naive, std::max(0.0, naive - row.iid_sum),
              "N=" + std::to_string(row.n) + " iid not above naive");
  }
  return o;
}

// Exhaustive grid f in {0, 0.05, ..., 1}^(N+1) with uniform omega.
Outcome b_n_grid() {
  Outcome o;
  for (int n : {2, 3}) {
    const int regs = n + 1;
    const std::vector<double> omega(regs, 1.0 / regs);
    std::vector<int> idx(regs, 0);
    double best = -1.0;
    std::vector<int> arg;
    while (true) {
      std::vector<double> f(regs);
      for (int i = 0; i < regs; ++i) f[i] = idx[i] * 0.05;
      const double v = b_n(f, omega);
      o.require(v <= 1.0 / regs + 1e-12, std::max(0.0, v - 1.0 / regs), "N=" + std::to_string(n) + " exceeds max omega");
      if (v > best) {
        best = v;
        arg = idx;
      }
      int k = 0;
      while (k < regs && ++idx[k] > 20) idx[k++] = 0;
      if (k == regs) break;
    }
    const auto zeros = std::count(arg.begin(), arg.end(), 0);
    const auto ones = std::count(arg.begin(), arg.end(), 20);
    o.require(zeros == 1 && ones == n, 0.0, "N=" + std::to_string(n) + " maximizer is not a naive vector");
    o.require(best == 1.0 / regs, std::abs(best - 1.0 / regs), "N=" + std::to_string(n) + " maximum is not 1/(N+1)");
  }
  return o;
}

Outcome kernel_battery() {
  Outcome o;
  OracleConfig cfg;
  cfg.seed = kSeed;
  cfg.sample_count = 500;
  for (const char* name : {"fvdg_trace_bounds", "fvdg_fidelity_bounds", "fidelity_multiplicativity",
                           "fid_oplus_block", "helstrom_saturation", "trace_pure", "accept_gap_chain",
                           "midpoint_concavity", "jensen_binomial"}) {
    const auto r = run_check(name, cfg);
    o.require(r.passed && r.samples >= 500, r.worst_violation, std::string(name) + " " + r.witness);
  }
  return o;
}

Outcome variable_rounds() {
  Outcome o;
  const auto target = TargetState::basis(2, 0);
  for (double mean : {5.0, 10.0, 20.0}) {
    for (const auto& dist : {RoundDistribution::truncated_geometric_with_mean(mean, static_cast<int>(20 * mean)),
                             RoundDistribution::uniform(0, static_cast<int>(2 * mean))}) {
      const auto p = VariableProtocol::canonical(target, dist);
      const double e = dist.mean();
      const std::string at = dist.family + " E[n]=" + std::to_string(e);
      const auto sa = evaluate_standalone(p, iid_standalone_attack(target, e).resolved);
      const double sb = 1.0 / (7.0 * e);
      o.require(sa.eps_sum() >= sb - 1e-9, std::max(0.0, sb - sa.eps_sum()), at + " stand-alone");
      const auto co = evaluate_composable(p, iid_composable_attack(target, e).resolved);
      const double cb = 1.0 / (4.0 * std::sqrt(e));
      o.require(co.eps_sum() >= cb - 1e-9, std::max(0.0, cb - co.eps_sum()), at + " composable");
    }
  }
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path();
  const std::vector<std::vector<std::string>> commands = {
      {"verify", "--samples", "50", "--format", "json"},
      {"verify", "--samples", "50", "--format", "csv"},
      {"tradeoff", "--n-max", "32", "--format", "csv"},
      {"tradeoff", "--n-max", "32", "--format", "json", "--target", "mixed:0.7,0.3", "--dim", "3",
       "--definition", "composable"},
  };
  int k = 0;
  for (const auto& cmd : commands) {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      const auto path = dir / ("qsvlab_acceptance_" + std::to_string(k) + "_" + std::to_string(run));
      std::vector<std::string> args{"qsvlab"};
      args.insert(args.end(), cmd.begin(), cmd.end());
      args.insert(args.end(), {"--seed", "7", "--out", path.string()});
      std::ostringstream out, err;
      const int code = cli::run_cli(args, out, err);
      o.require(code == 0, 0.0, cmd[0] + " exited with " + std::to_string(code) + ": " + err.str());
      const std::string bytes = slurp(path);
      fs::remove(path);
      o.require(!bytes.empty(), 0.0, cmd[0] + " wrote nothing");
      if (run == 0) {
        first = bytes;
      } else {
        o.require(bytes == first, 0.0, cmd[0] + " artifacts differ between runs");
      }
    }
    ++k;
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"canonical protocol exactness (honest 0, naive 1/(N+1))", canonical_exactness},
      {"entangled attacks stay below 1/(N+1)", entangled_ceiling},
      {"i.i.d. stand-alone attack reaches 4/(27N)", standalone_achievement},
      {"i.i.d. composable attack reaches sqrt(eta1)/(4 sqrt N)", composable_achievement},
      {"i.i.d. beats naive for N in 17..32", crossover},
      {"B_N grid maximum at the naive vector", b_n_grid},
      {"kernel property battery", kernel_battery},
      {"variable-round bounds", variable_rounds},
      {"byte-identical artifacts", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first
              << " (worst " << o.worst << ")";
    if (!o.passed) std::cout << " -- " << o.detail;
    std::cout << '\n';
    failures += o.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
