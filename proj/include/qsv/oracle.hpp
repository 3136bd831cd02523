#pragma once

// Brute-force cross-checks: p-grid optimization over explicit block
// embeddings, explicit tensor-space computations and seeded random sweeps of
// the inequalities the closed forms rely on.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsv/security.hpp"

namespace qsv {

struct OracleConfig {
  std::uint64_t seed = 20240601;
  int sample_count = 500;
  int grid_points = 10000;
  std::size_t max_tensor_dim = 4096;
  double tolerance = 1e-9;       // algebraic checks
  double grid_tolerance = 1e-6;  // checks that go through a p-grid

  void validate() const;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  std::string witness;  // inputs of the worst sample
};

class UnknownCheckError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid optimum of F(rho_D, p phi (+) (1-p)) (maximum) or of the halved trace
/// distance (minimum) over p in {0, 1/(G-1), ..., 1}, built from explicit
/// (d+1)-dimensional block operators. Ties go to the smallest p.
IdealOptimum grid_max_ideal_p(const AbortingState& out, const TargetState& target, Definition definition,
                              int grid_points);

/// grid_max_ideal_p followed by golden-section refinement inside the bracket
/// around the best grid cell. Both objectives are concave (sqrt F) or convex
/// (trace distance) in p, so the refinement converges to the true optimum.
IdealOptimum refined_ideal_p(const AbortingState& out, const TargetState& target, Definition definition,
                             int grid_points);

/// (1/2)||a^{(x)k} - b^{(x)k}||_1 from explicitly built tensor powers.
double exact_multicopy_distance(const DensityOperator& a, const DensityOperator& b, int k,
                                std::size_t max_tensor_dim = 4096);

/// Random entangled attacks on the canonical protocol with a random pure
/// target; passes when every stand-alone eps_D is at most 1/(N+1).
CheckResult entangled_attack_sweep(int n_verify, Eigen::Index dim, int samples, std::uint64_t seed,
                                   const OracleConfig& config = {});

/// Every registered check, in run order.
const std::vector<std::string>& check_names();

CheckResult run_check(const std::string& name, const OracleConfig& config);
CheckResult inequality_sweep(const std::string& name, int samples, std::uint64_t seed);

std::vector<CheckResult> run_checks(const std::vector<std::string>& names, const OracleConfig& config);
std::vector<CheckResult> run_all(const OracleConfig& config);

}  // namespace qsv
