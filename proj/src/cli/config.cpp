#include "qsv/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include "qsv/random.hpp"

namespace qsv::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) throw ConfigError(where + ": invalid number '" + text + "'");
  return v;
}

long long parse_int(const std::string& text, const std::string& where) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) throw ConfigError(where + ": invalid integer '" + text + "'");
  return v;
}

std::uint64_t parse_seed(const std::string& text, const std::string& where) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) throw ConfigError(where + ": invalid seed '" + text + "'");
  return v;
}

int parse_count(const std::string& text, const std::string& where, int min) {
  const long long v = parse_int(text, where);
  if (v < min || v > 1'000'000'000) {
    throw ConfigError(where + ": value must be at least " + std::to_string(min));
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(where + ": invalid boolean '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QSVLAB_SEED")) {
    return parse_seed(trim(env), "QSVLAB_SEED");
  }
  return kDefaultSeed;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "target", "dim",  "n-min", "n-max",     "attack",  "alpha",   "definition",  "seed",
      "out",    "format", "jobs", "round-dist", "tolerance", "grid-tolerance", "check", "samples",
      "grid-points", "plot", "list"};
  return keys;
}

bool is_list_key(const std::string& key) {
  const auto k = normalize_key(key);
  return k == "check" || k == "round-dist";
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value,
                   const std::string& where) {
  const std::string key = normalize_key(trim(raw_key));
  const std::string value = trim(raw_value);
  const std::string at = where + " (" + key + ")";
  if (key == "target") {
    c.target = value;
  } else if (key == "dim") {
    c.dim = parse_count(value, at, 2);
  } else if (key == "n-min") {
    c.n_min = parse_count(value, at, 1);
  } else if (key == "n-max") {
    c.n_max = parse_count(value, at, 1);
  } else if (key == "attack") {
    c.attack = value;
  } else if (key == "alpha") {
    c.alpha = parse_double(value, at);
  } else if (key == "definition") {
    c.definition = value;
  } else if (key == "seed") {
    c.seed = parse_seed(value, at);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "format") {
    c.format = value;
  } else if (key == "jobs") {
    c.jobs = parse_count(value, at, 0);
  } else if (key == "round-dist") {
    c.round_dists.push_back(value);
  } else if (key == "tolerance") {
    c.tolerance = parse_double(value, at);
  } else if (key == "grid-tolerance") {
    c.grid_tolerance = parse_double(value, at);
  } else if (key == "check") {
    c.checks.push_back(value);
  } else if (key == "samples") {
    c.samples = parse_count(value, at, 1);
  } else if (key == "grid-points") {
    c.grid_points = parse_count(value, at, 2);
  } else if (key == "plot") {
    c.plot = value;
  } else if (key == "list") {
    c.list = parse_bool(value, at);
  } else {
    throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    const std::string where = path + ":" + std::to_string(number);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value, got '" + body + "'");
    apply_setting(config, body.substr(0, eq), body.substr(eq + 1), where);
  }
}

void ExperimentConfig::validate() const {
  if (n_min > n_max) throw ConfigError("n-min exceeds n-max");
  if (definition != "standalone" && definition != "composable" && definition != "both") {
    throw ConfigError("definition must be standalone, composable or both");
  }
  if (!format.empty() && format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (attack != "auto" && attack != "naive" && attack != "iid_standalone" && attack != "iid_composable") {
    throw ConfigError("attack must be auto, naive, iid_standalone or iid_composable");
  }
  if (alpha && !(*alpha > 0.0 && *alpha <= 1.0)) throw ConfigError("alpha must lie in (0,1]");
  if (!(tolerance > 0.0) || !(grid_tolerance > 0.0)) throw ConfigError("tolerances must be positive");
}

TargetState make_target(const ExperimentConfig& config) {
  const std::string& spec = config.target;
  const Eigen::Index dim = config.dim;
  try {
    if (spec == "pure-random") {
      Rng rng = make_rng(config.seed, 0x7a72676574ULL);
      return TargetState::pure(haar_pure_state(dim, rng));
    }
    if (spec.rfind("basis:", 0) == 0) {
      const long long k = parse_int(spec.substr(6), "target");
      return TargetState::basis(dim, static_cast<Eigen::Index>(k));
    }
    if (spec.rfind("mixed:", 0) == 0) {
      std::vector<double> spectrum;
      for (const auto& part : split(spec.substr(6), ',')) spectrum.push_back(parse_double(part, "target spectrum"));
      double total = 0.0;
      for (double e : spectrum) total += e;
      if (std::abs(total - 1.0) > 1e-10) throw ConfigError("target spectrum must sum to 1");
      return TargetState::diagonal(spectrum, dim);
    }
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("target: ") + e.what());
  }
  throw ConfigError("target must be basis:K, pure-random or mixed:E1,E2,..., got '" + spec + "'");
}

RoundDistribution parse_round_dist(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("round-dist: expected FAMILY:PARAMS, got '" + spec + "'");
  const std::string family = spec.substr(0, colon);
  const auto params = split(spec.substr(colon + 1), ',');
  const std::string where = "round-dist '" + spec + "'";
  auto need = [&](std::size_t n) {
    if (params.size() != n) throw ConfigError(where + ": expected " + std::to_string(n) + " parameters");
  };
  try {
    if (family == "point") {
      need(1);
      return RoundDistribution::point_mass(parse_count(params[0], where, 1));
    }
    if (family == "geometric") {
      need(2);
      return RoundDistribution::truncated_geometric(parse_double(params[0], where), parse_count(params[1], where, 1));
    }
    if (family == "geometric-mean") {
      need(2);
      return RoundDistribution::truncated_geometric_with_mean(parse_double(params[0], where),
                                                              parse_count(params[1], where, 1));
    }
    if (family == "uniform") {
      need(2);
      return RoundDistribution::uniform(parse_count(params[0], where, 0), parse_count(params[1], where, 0));
    }
  } catch (const ValidationError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown family (point, geometric, geometric-mean, uniform)");
}

}  // namespace qsv::cli
