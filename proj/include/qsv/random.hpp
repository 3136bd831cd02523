#pragma once

// Seeded random instances: Haar pure states, random mixed states and random
// binary measurements.

#include <cstdint>
#include <random>

#include "qsv/core.hpp"

namespace qsv {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream); same inputs give the same sequence.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

template <typename Real = double>
VectorC<Real> complex_gaussian_vector(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorC<Real> v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double re = normal(rng);
    double im = normal(rng);
    v(i) = std::complex<Real>(Real(re), Real(im));
  }
  return v;
}

/// Normalized complex Gaussian vector (Haar-distributed pure state).
template <typename Real = double>
PureStateT<Real> haar_pure_state(Eigen::Index dim, Rng& rng) {
  return PureStateT<Real>::normalized(complex_gaussian_vector<Real>(dim, rng));
}

/// Haar unitary from the QR decomposition of a complex Ginibre matrix.
template <typename Real = double>
MatrixC<Real> haar_unitary(Eigen::Index dim, Rng& rng) {
  MatrixC<Real> g(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) g.col(c) = complex_gaussian_vector<Real>(dim, rng);
  Eigen::HouseholderQR<MatrixC<Real>> qr(g);
  MatrixC<Real> q = qr.householderQ();
  MatrixC<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    std::complex<Real> d = r(i, i);
    Real mag = std::abs(d);
    if (mag > Real(0)) q.col(i) *= d / mag;
  }
  return q;
}

/// Convex mixture of `terms` Haar pure states with uniform random weights.
template <typename Real = double>
DensityOperatorT<Real> random_density(Eigen::Index dim, Rng& rng, Eigen::Index terms = -1) {
  if (terms < 1) terms = dim;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  MatrixC<Real> rho = MatrixC<Real>::Zero(dim, dim);
  Real total = 0;
  for (Eigen::Index t = 0; t < terms; ++t) {
    Real w = Real(uniform(rng)) + Real(1e-3);
    rho += w * haar_pure_state<Real>(dim, rng).projector();
    total += w;
  }
  return DensityOperatorT<Real>(MatrixC<Real>(rho / total));
}

/// Accept operator U diag(u) U^dagger with u uniform in [0,1].
template <typename Real = double>
BinaryMeasurementT<Real> random_measurement(Eigen::Index dim, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  MatrixC<Real> u = haar_unitary<Real>(dim, rng);
  VectorC<Real> diag(dim);
  for (Eigen::Index i = 0; i < dim; ++i) diag(i) = Real(uniform(rng));
  return BinaryMeasurementT<Real>(MatrixC<Real>(u * diag.asDiagonal() * u.adjoint()));
}

}  // namespace qsv
