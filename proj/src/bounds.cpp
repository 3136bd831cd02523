#include "qsv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsv/core.hpp"

namespace qsv {

StandaloneBound standalone_bound(int n) {
  if (n < 1) throw ValidationError("standalone_bound: n must be >= 1");
  return {1.0 / (7.0 * n), 4.0 / (27.0 * n)};
}

double composable_bound(double n, double eta1) {
  if (!(n > 0.0)) throw ValidationError("composable_bound: n must be positive");
  if (!(eta1 > 0.0 && eta1 <= 1.0)) throw ValidationError("composable_bound: eta1 must lie in (0,1]");
  return std::sqrt(eta1) / (4.0 * std::sqrt(n));
}

double standalone_pre_bound(double alpha, double n) {
  if (!(n > 0.0)) throw ValidationError("standalone_pre_bound: n must be positive");
  return alpha / n * (1.0 - std::sqrt(alpha));
}

double b_n(std::span<const double> f, std::span<const double> omega) {
  if (f.size() != omega.size()) {
    throw DimensionError("b_n: f and omega lengths differ");
  }
  std::size_t zeros = 0;
  std::size_t zero_at = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] >= 0.0 && f[i] <= 1.0)) throw ValidationError("b_n: f must lie in [0,1]");
    if (f[i] == 0.0) {
      ++zeros;
      zero_at = i;
    }
  }
  // A zero factor kills every product that contains it.
  if (zeros >= 2) return 0.0;
  auto product_except = [&](std::size_t skip) {
    double p = 1.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (j != skip) p *= f[j];
    }
    return p;
  };
  if (zeros == 1) {
    return omega[zero_at] * (1.0 - std::sqrt(1.0 - product_except(zero_at)));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    total += omega[i] * (1.0 - f[i]) * (1.0 - std::sqrt(std::max(0.0, 1.0 - product_except(i))));
  }
  return total;
}

CanonicalSecurity canonical_security_values(int n) {
  if (n < 1) throw ValidationError("canonical_security_values: n must be >= 1");
  return {1.0 / (n + 1.0), 2.0 / std::sqrt(n + 1.0)};
}

double composable_from_kappa(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw ValidationError("composable_from_kappa: kappa must lie in [0,1]");
  return 2.0 * std::sqrt(std::max(0.0, 2.0 * kappa - kappa * kappa));
}

VariableRoundBounds variable_round_bounds(double expected_n, double eta1) {
  if (!(expected_n > 0.0)) throw ValidationError("variable_round_bounds: expected_n must be positive");
  return {1.0 / (7.0 * expected_n), composable_bound(expected_n, eta1)};
}

std::vector<BoundSpec> named_bounds(int n, double eta1) {
  const auto sa = standalone_bound(n);
  const auto canon = canonical_security_values(n);
  return {
      {"standalone_loose", sa.loose},
      {"standalone_tight", sa.tight},
      {"composable", composable_bound(n, eta1)},
      {"canonical_standalone", canon.standalone},
      {"canonical_composable", canon.composable},
  };
}

}  // namespace qsv
