#pragma once

// Experiment configuration: a flat key=value file plus command-line
// overrides. Every flag name (without the leading dashes) is also a key.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsv/protocol.hpp"

namespace qsv::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;
  std::string target = "basis:0";  // basis:K | pure-random | mixed:E1,E2,...
  int dim = 2;
  int n_min = 1;
  int n_max = 64;
  std::string attack = "auto";  // auto | naive | iid_standalone | iid_composable
  std::optional<double> alpha;
  std::string definition = "both";  // standalone | composable | both
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format;  // csv or json; empty picks the command default
  int jobs = 0;  // 0: available parallelism
  std::vector<std::string> round_dists;
  double tolerance = 1e-9;
  double grid_tolerance = 1e-6;
  std::vector<std::string> checks;
  int samples = 500;
  int grid_points = 10000;
  std::string plot;
  bool list = false;

  void validate() const;
};

/// Default seed, or QSVLAB_SEED when set.
std::uint64_t default_seed();

/// Applies one setting. `where` prefixes error messages (file:line or flag).
/// List-valued keys (check, round-dist) append.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value,
                   const std::string& where);

/// Reads `path`; blank lines and lines starting with '#' are ignored.
void load_config_file(ExperimentConfig& config, const std::string& path);

/// Every key accepted by apply_setting.
const std::vector<std::string>& config_keys();
bool is_list_key(const std::string& key);

TargetState make_target(const ExperimentConfig& config);

/// point:N | geometric:Q,NMAX | geometric-mean:MEAN,NMAX | uniform:A,B
RoundDistribution parse_round_dist(const std::string& spec);

}  // namespace qsv::cli
