#pragma once

// Closed-form security bounds for cut-and-choose verification.

#include <span>
#include <string>
#include <vector>

namespace qsv {

struct StandaloneBound {
  double loose;  // 1/(7N)
  double tight;  // 4/(27N), before relaxing to 1/(7N)
};

/// Lower bound on eps_H + eps_D (fidelity-based definition).
StandaloneBound standalone_bound(int n);

/// sqrt(eta1) / (4 sqrt(n)); `n` may be an expected round count.
double composable_bound(double n, double eta1 = 1.0);

/// h_N(alpha) = (alpha/N)(1 - sqrt(alpha)), maximized at alpha = 4/9.
double standalone_pre_bound(double alpha, double n);

/// B_N(f) = sum_i omega(i) (1 - f_i) (1 - sqrt(1 - prod_{j != i} f_j)).
double b_n(std::span<const double> f, std::span<const double> omega);

struct CanonicalSecurity {
  double standalone;  // 1/(N+1)
  double composable;  // 2/sqrt(N+1)
};

/// Security parameters of the canonical protocol (uniform omega, projection
/// onto phi^{(x)N}); it is 0-correct under both definitions.
CanonicalSecurity canonical_security_values(int n);

/// Composable parameter 2 sqrt(2 kappa - kappa^2) implied by a stand-alone
/// fidelity of at least sqrt(1 - kappa).
double composable_from_kappa(double kappa);

struct VariableRoundBounds {
  double standalone;
  double composable;
};

VariableRoundBounds variable_round_bounds(double expected_n, double eta1 = 1.0);

struct BoundSpec {
  std::string name;
  double value;
};

/// Every bound that applies at (n, eta1), by name.
std::vector<BoundSpec> named_bounds(int n, double eta1 = 1.0);

}  // namespace qsv
