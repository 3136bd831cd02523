#pragma once

// Small closed-form references used across the unit tests.

#include <cmath>
#include <complex>

#include "qsv/core.hpp"

namespace qsv::testing {

using cd = std::complex<double>;

/// (I + r.sigma) / 2.
inline DensityOperator bloch(double x, double y, double z) {
  ComplexMatrix m(2, 2);
  m << cd(1 + z, 0), cd(x, -y), cd(x, y), cd(1 - z, 0);
  return DensityOperator(ComplexMatrix(m / 2.0));
}

/// Qubit fidelity: Tr(ab) + 2 sqrt(det a det b).
inline double qubit_fidelity(const DensityOperator& a, const DensityOperator& b) {
  const double tr = (a.matrix() * b.matrix()).trace().real();
  const double da = a.matrix().determinant().real();
  const double db = b.matrix().determinant().real();
  return tr + 2.0 * std::sqrt(std::max(0.0, da * db));
}

/// Qubit trace distance: half the Euclidean distance of Bloch vectors.
inline double bloch_distance(double x1, double y1, double z1, double x2, double y2, double z2) {
  return 0.5 * std::sqrt((x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2) + (z1 - z2) * (z1 - z2));
}

}  // namespace qsv::testing
