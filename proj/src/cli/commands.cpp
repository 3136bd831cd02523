#include "qsv/cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "qsv/attacks.hpp"
#include "qsv/cli/report.hpp"
#include "qsv/oracle.hpp"

namespace qsv::cli {
namespace {

class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError(path + ": cannot open output file");
    }
  }
  std::ostream& stream(std::ostream& fallback) { return file_.is_open() ? file_ : fallback; }

 private:
  std::ofstream file_;
};

std::vector<Definition> definitions_of(const ExperimentConfig& c) {
  if (c.definition == "standalone") return {Definition::standalone};
  if (c.definition == "composable") return {Definition::composable};
  return {Definition::standalone, Definition::composable};
}

AttackKind attack_for(const ExperimentConfig& c, Definition def) {
  if (c.attack == "auto") return def == Definition::standalone ? AttackKind::iid_standalone : AttackKind::iid_composable;
  return *parse_attack_kind(c.attack);
}

double alpha_for(const ExperimentConfig& c, AttackKind kind) {
  if (c.alpha) return *c.alpha;
  return kind == AttackKind::iid_standalone ? kStandaloneAlpha : kComposableAlpha;
}

void require_compatible(const ExperimentConfig& c, const TargetState& target) {
  for (auto def : definitions_of(c)) {
    const auto kind = attack_for(c, def);
    if (!target.is_pure() && kind != AttackKind::iid_composable) {
      throw ConfigError("attack '" + std::string(to_string(kind)) + "' needs a pure target");
    }
    if (kind == AttackKind::iid_composable && target.complement().cols() == 0) {
      throw ConfigError("attack 'iid_composable' needs a target whose rank is below the dimension");
    }
  }
}

void write_rows(const ExperimentConfig& c, const std::vector<ReportRow>& rows, const std::string& command,
                std::ostream& out) {
  OutputSink sink(c.out);
  std::ostream& machine = sink.stream(out);
  if (c.format == "json") {
    write_json(machine, rows, command);
  } else {
    write_csv(machine, rows, command);
  }
  if (!c.out.empty()) write_table(out, rows);
  if (!c.plot.empty()) {
    std::ofstream plot(c.plot, std::ios::binary | std::ios::trunc);
    if (!plot) throw ConfigError(c.plot + ": cannot open plot file");
    write_plot(plot, rows);
  }
}

template <typename Fn>
ReportRow timed(Fn fn) {
  const auto start = std::chrono::steady_clock::now();
  ReportRow row = fn();
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_verify(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  if (c.list) {
    for (const auto& name : check_names()) out << name << '\n';
    return kExitOk;
  }
  std::vector<std::string> names = c.checks.empty() ? check_names() : c.checks;
  for (const auto& name : names) {
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      err << "qsvlab verify: unknown check '" << name << "' (see --list)\n";
      return kExitUsage;
    }
  }
  OracleConfig oc;
  oc.seed = c.seed;
  oc.sample_count = c.samples;
  oc.grid_points = c.grid_points;
  oc.tolerance = c.tolerance;
  oc.grid_tolerance = c.grid_tolerance;
  const auto results = parallel_map<CheckResult>(names.size(), resolve_jobs(c.jobs),
                                                 [&](std::size_t i) { return run_check(names[i], oc); });
  {
    OutputSink sink(c.out);
    std::ostream& machine = sink.stream(out);
    if (c.format == "csv") {
      write_checks_csv(machine, results);
    } else {
      write_checks_json(machine, results, c.seed);
    }
  }
  if (!c.out.empty()) write_checks_table(out, results);
  const bool all = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  return all ? kExitOk : kExitFailure;
}

int cmd_tradeoff(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const TargetState target = make_target(c);
  require_compatible(c, target);
  const auto defs = definitions_of(c);
  const std::size_t per_n = defs.size();
  const std::size_t count = static_cast<std::size_t>(c.n_max - c.n_min + 1) * per_n;

  auto task = [&](std::size_t i) -> std::optional<ReportRow> {
    const int n = c.n_min + static_cast<int>(i / per_n);
    const Definition def = defs[i % per_n];
    const auto kind = attack_for(c, def);
    const FixedProtocol protocol =
        target.is_pure() ? FixedProtocol::canonical(target, n) : FixedProtocol::support_projective(target, n);
    if (kind == AttackKind::naive_orthogonal) {
      return timed([&] {
        const auto recipe = naive_attack(protocol);
        ReportRow row = make_row(evaluate(def, protocol, recipe.resolved), "naive", std::nullopt);
        // The naive attack's exact guarantee is max omega; the theorem bounds
        // concern optimal i.i.d. attacks.
        const double ceiling = protocol.omega()[static_cast<std::size_t>(*recipe.output_round)];
        row.bound_loose = ceiling;
        row.bound_tight = ceiling;
        row.slack = row.eps_sum - ceiling;
        return row;
      });
    }
    const double alpha = alpha_for(c, kind);
    if (kind == AttackKind::iid_composable && alpha * alpha > target.eta1() * n) return std::nullopt;
    return timed([&] {
      const auto recipe = kind == AttackKind::iid_standalone ? iid_standalone_attack(target, n, alpha)
                                                             : iid_composable_attack(target, n, alpha);
      return make_row(evaluate(def, protocol, recipe.resolved), std::string(to_string(kind)), alpha);
    });
  };
  const auto results = parallel_map<std::optional<ReportRow>>(count, resolve_jobs(c.jobs), task);
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i]) {
      rows.push_back(*results[i]);
    } else {
      err << "qsvlab tradeoff: skipping N=" << c.n_min + static_cast<int>(i / per_n)
          << " (alpha^2 exceeds eta_1 N)\n";
    }
  }
  write_rows(c, rows, "tradeoff", out);
  return kExitOk;
}

int cmd_variable_round(const ExperimentConfig& c, std::ostream& out, std::ostream&) {
  if (c.attack == "naive") throw ConfigError("variable-round supports i.i.d. attacks only");
  const TargetState target = make_target(c);
  require_compatible(c, target);
  const std::vector<std::string> specs = c.round_dists.empty() ? std::vector<std::string>{"geometric-mean:10,200"}
                                                               : c.round_dists;
  std::vector<RoundDistribution> dists;
  for (const auto& s : specs) dists.push_back(parse_round_dist(s));
  const auto defs = definitions_of(c);
  const std::size_t per = defs.size();

  auto task = [&](std::size_t i) {
    const auto& dist = dists[i / per];
    const Definition def = defs[i % per];
    return timed([&] {
      const VariableProtocol protocol =
          target.is_pure() ? VariableProtocol::canonical(target, dist) : VariableProtocol::support_projective(target, dist);
      const double e = protocol.expected_rounds();
      const auto kind = attack_for(c, def);
      const double alpha = alpha_for(c, kind);
      const auto recipe = kind == AttackKind::iid_standalone ? iid_standalone_attack(target, e, alpha)
                                                             : iid_composable_attack(target, e, alpha);
      ReportRow row = make_row(evaluate(def, protocol, recipe.resolved), std::string(to_string(kind)), alpha);
      row.note = specs[i / per] + " truncated=" + format_number(dist.truncated_mass);
      return row;
    });
  };
  const auto rows = parallel_map<ReportRow>(dists.size() * per, resolve_jobs(c.jobs), task);
  write_rows(c, rows, "variable-round", out);
  return kExitOk;
}

int cmd_crossover(const ExperimentConfig& c, std::ostream& out, std::ostream&) {
  const auto rows = crossover_scan(c.n_min, c.n_max);
  {
    OutputSink sink(c.out);
    std::ostream& machine = sink.stream(out);
    if (c.format == "json") {
      write_crossover_json(machine, rows);
    } else {
      write_crossover_csv(machine, rows);
    }
  }
  if (!c.out.empty()) write_crossover_table(out, rows);
  return kExitOk;
}

namespace {

const std::map<std::string, std::string>& flag_help() {
  static const std::map<std::string, std::string> help = {
      {"target", "basis:K, pure-random or mixed:E1,E2,... (default basis:0)"},
      {"dim", "Hilbert space dimension (default 2)"},
      {"n-min", "smallest N (default 1)"},
      {"n-max", "largest N (default 64)"},
      {"attack", "auto, naive, iid_standalone or iid_composable (default auto)"},
      {"alpha", "attack parameter override"},
      {"definition", "standalone, composable or both (default both)"},
      {"seed", "random seed (default 20240601 or QSVLAB_SEED)"},
      {"out", "write the machine-readable report here and print a table"},
      {"format", "csv or json"},
      {"jobs", "worker threads (default: available parallelism)"},
      {"round-dist", "point:N, geometric:Q,NMAX, geometric-mean:MEAN,NMAX or uniform:A,B (repeatable)"},
      {"tolerance", "tolerance of algebraic checks (default 1e-9)"},
      {"grid-tolerance", "tolerance of grid checks (default 1e-6)"},
      {"check", "run only this check (repeatable)"},
      {"samples", "random samples per check (default 500)"},
      {"grid-points", "points of the ideal-p grid (default 10000)"},
      {"plot", "write two-column plot data here"},
  };
  return help;
}

struct SubcommandFlags {
  CLI::App* app = nullptr;
  std::string config_path;
  bool list = false;
  std::map<std::string, std::vector<std::string>> values;
  std::map<std::string, CLI::Option*> options;
};

void add_flags(SubcommandFlags& f) {
  f.app->add_option("--config", f.config_path, "key = value config file; flags win over it");
  for (const auto& [key, help] : flag_help()) {
    auto* opt = f.app->add_option("--" + key, f.values[key], help);
    if (is_list_key(key)) {
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    } else {
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->expected(1);
    }
    f.options[key] = opt;
  }
  f.options["list"] = f.app->add_flag("--list", f.list, "list check names and exit");
}

ExperimentConfig build_config(const SubcommandFlags& f) {
  ExperimentConfig c;
  c.experiment = f.app->get_name();
  c.seed = default_seed();
  if (!f.config_path.empty()) load_config_file(c, f.config_path);
  for (const auto& [key, opt] : f.options) {
    if (opt->count() == 0) continue;
    if (key == "list") {
      c.list = f.list;
      continue;
    }
    if (key == "check") c.checks.clear();
    if (key == "round-dist") c.round_dists.clear();
    for (const auto& v : f.values.at(key)) apply_setting(c, key, v, "--" + key);
  }
  c.validate();
  return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qsvlab: security numerics for cut-and-choose quantum state verification", "qsvlab"};
  app.require_subcommand(1);
  std::vector<SubcommandFlags> subs;
  subs.reserve(4);
  for (const auto& [name, desc] : std::vector<std::pair<std::string, std::string>>{
           {"verify", "run the oracle check battery"},
           {"tradeoff", "eps_H + eps_D of the configured attack against the canonical protocol, per N"},
           {"variable-round", "i.i.d. attacks against variable-round protocols"},
           {"crossover", "composable eps sums of the naive and i.i.d. attacks"}}) {
    subs.push_back({});
    subs.back().app = app.add_subcommand(name, desc);
    add_flags(subs.back());
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& f : subs) {
      if (!f.app->parsed()) continue;
      const ExperimentConfig c = build_config(f);
      const std::string& name = c.experiment;
      if (name == "verify") return cmd_verify(c, out, err);
      if (name == "tradeoff") return cmd_tradeoff(c, out, err);
      if (name == "variable-round") return cmd_variable_round(c, out, err);
      return cmd_crossover(c, out, err);
    }
  } catch (const ConfigError& e) {
    err << "qsvlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "qsvlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "qsvlab: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace qsv::cli
