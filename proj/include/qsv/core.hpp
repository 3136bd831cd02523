#pragma once

// Dense density-operator kernels: validated state types, tensor products,
// fidelity, trace distance and optimal binary discrimination.
//
// Everything here is templated on the real scalar so the same kernels run in
// double (the default used by the rest of the library) or long double.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsv {

template <typename Real>
using MatrixC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using VectorR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = MatrixC<double>;
using ComplexVector = VectorC<double>;
using RealVector = VectorR<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SizeCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Numerical tolerances used for validation and for comparisons.
template <typename Real>
struct BasicTolerances {
  Real herm = Real(1e-10);
  Real trace = Real(1e-10);
  Real norm = Real(1e-10);
  Real psd = Real(1e-10);
  Real fid = Real(1e-9);
};
using Tolerances = BasicTolerances<double>;

namespace detail {

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return ((m + m.adjoint()) * Scalar(0.5)).eval();
}

/// Eigenvalues whose magnitude is below this are rounding noise of the solver.
template <typename Real>
Real noise_floor(const VectorR<Real>& eigenvalues) {
  Real scale = eigenvalues.size() == 0 ? Real(0) : eigenvalues.cwiseAbs().maxCoeff();
  return Real(64) * std::numeric_limits<Real>::epsilon() * std::max(scale, Real(1e-300));
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix with PSD clamping: eigenvalues
/// below -psd_tol raise ValidationError, the rest that are negative or within
/// solver noise of zero become exactly zero.
template <typename Real>
struct PsdEigen {
  VectorR<Real> values;   // ascending
  MatrixC<Real> vectors;  // columns
};

template <typename Derived>
auto psd_eigen(const Eigen::MatrixBase<Derived>& m, typename Eigen::NumTraits<typename Derived::Scalar>::Real psd_tol) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Eigen::SelfAdjointEigenSolver<MatrixC<Real>> solver(detail::hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    throw ValidationError("psd_eigen: eigendecomposition failed");
  }
  PsdEigen<Real> out{solver.eigenvalues(), solver.eigenvectors()};
  const Real floor = detail::noise_floor<Real>(out.values);
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    if (out.values(i) < -psd_tol) {
      throw ValidationError("psd_eigen: eigenvalue " + std::to_string(double(out.values(i))) +
                            " below -tolerance");
    }
    if (out.values(i) <= floor) out.values(i) = Real(0);
  }
  return out;
}

/// Principal square root of a PSD matrix.
template <typename Derived>
auto psd_sqrt(const Eigen::MatrixBase<Derived>& m,
              typename Eigen::NumTraits<typename Derived::Scalar>::Real psd_tol = 1e-10) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  auto eig = psd_eigen(m, psd_tol);
  VectorC<Real> roots = eig.values.cwiseSqrt().template cast<std::complex<Real>>();
  return MatrixC<Real>(eig.vectors * roots.asDiagonal() * eig.vectors.adjoint());
}

/// Trace norm of a Hermitian matrix: sum of absolute eigenvalues.
template <typename Derived>
auto trace_norm_hermitian(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Eigen::SelfAdjointEigenSolver<MatrixC<Real>> solver(detail::hermitian_part(m), Eigen::EigenvaluesOnly);
  return Real(solver.eigenvalues().cwiseAbs().sum());
}

/// Fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 of two PSD matrices, not
/// necessarily normalized. Evaluated as the squared nuclear norm of
/// sqrt(a) sqrt(b), which keeps rank-deficient inputs accurate.
template <typename DerivedA, typename DerivedB>
auto fidelity_psd(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                  typename Eigen::NumTraits<typename DerivedA::Scalar>::Real psd_tol = 1e-10) {
  using Real = typename Eigen::NumTraits<typename DerivedA::Scalar>::Real;
  detail::require_same_dim(a.rows(), b.rows(), "fidelity");
  MatrixC<Real> product = psd_sqrt(a, psd_tol) * psd_sqrt(b, psd_tol);
  Eigen::JacobiSVD<MatrixC<Real>> svd(product);
  Real nuclear = svd.singularValues().sum();
  return nuclear * nuclear;
}

template <typename Real>
class PureStateT {
 public:
  explicit PureStateT(VectorC<Real> amplitudes, const BasicTolerances<Real>& tol = {})
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) throw ValidationError("PureState: empty vector");
    Real norm = amplitudes_.norm();
    if (std::abs(norm - Real(1)) > tol.norm) {
      throw ValidationError("PureState: norm " + std::to_string(double(norm)) + " is not 1");
    }
  }

  static PureStateT basis(Eigen::Index dim, Eigen::Index k) {
    if (k < 0 || k >= dim) throw ValidationError("PureState::basis: index out of range");
    VectorC<Real> v = VectorC<Real>::Zero(dim);
    v(k) = Real(1);
    return PureStateT(std::move(v));
  }

  /// Normalizes the given vector first.
  static PureStateT normalized(const VectorC<Real>& v) {
    Real norm = v.norm();
    if (!(norm > Real(0))) throw ValidationError("PureState::normalized: zero vector");
    return PureStateT(v / norm);
  }

  Eigen::Index dim() const { return amplitudes_.size(); }
  const VectorC<Real>& amplitudes() const { return amplitudes_; }
  MatrixC<Real> projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  VectorC<Real> amplitudes_;
};

template <typename Real>
class DensityOperatorT {
 public:
  explicit DensityOperatorT(const MatrixC<Real>& matrix, const BasicTolerances<Real>& tol = {}) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
      throw ValidationError("DensityOperator: matrix must be square and non-empty");
    }
    Real herm_err = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > tol.herm) {
      throw ValidationError("DensityOperator: not Hermitian (deviation " + std::to_string(double(herm_err)) + ")");
    }
    matrix_ = detail::hermitian_part(matrix);
    Real trace = matrix_.trace().real();
    if (std::abs(trace - Real(1)) > tol.trace) {
      throw ValidationError("DensityOperator: trace " + std::to_string(double(trace)) + " is not 1");
    }
    Eigen::SelfAdjointEigenSolver<MatrixC<Real>> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol.psd) {
      throw ValidationError("DensityOperator: negative eigenvalue " +
                            std::to_string(double(solver.eigenvalues().minCoeff())));
    }
  }

  static DensityOperatorT from_pure(const PureStateT<Real>& psi) { return DensityOperatorT(psi.projector()); }
  static DensityOperatorT basis(Eigen::Index dim, Eigen::Index k) {
    return from_pure(PureStateT<Real>::basis(dim, k));
  }
  static DensityOperatorT maximally_mixed(Eigen::Index dim) {
    return DensityOperatorT(MatrixC<Real>::Identity(dim, dim) / Real(dim));
  }
  static DensityOperatorT diagonal(const VectorR<Real>& probabilities) {
    return DensityOperatorT(MatrixC<Real>(probabilities.template cast<std::complex<Real>>().asDiagonal()));
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const MatrixC<Real>& matrix() const { return matrix_; }

 private:
  MatrixC<Real> matrix_;
};

/// Binary measurement given by its accept operator mu(0); mu(1) = 1 - mu(0).
template <typename Real>
class BinaryMeasurementT {
 public:
  explicit BinaryMeasurementT(const MatrixC<Real>& accept, const BasicTolerances<Real>& tol = {}) {
    if (accept.rows() != accept.cols() || accept.rows() < 1) {
      throw ValidationError("BinaryMeasurement: operator must be square and non-empty");
    }
    if ((accept - accept.adjoint()).cwiseAbs().maxCoeff() > tol.herm) {
      throw ValidationError("BinaryMeasurement: accept operator not Hermitian");
    }
    accept_ = detail::hermitian_part(accept);
    Eigen::SelfAdjointEigenSolver<MatrixC<Real>> solver(accept_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol.psd || solver.eigenvalues().maxCoeff() > Real(1) + tol.psd) {
      throw ValidationError("BinaryMeasurement: accept operator eigenvalues outside [0,1]");
    }
  }

  static BinaryMeasurementT accept_all(Eigen::Index dim) {
    return BinaryMeasurementT(MatrixC<Real>::Identity(dim, dim));
  }
  static BinaryMeasurementT projector_onto(const PureStateT<Real>& psi) { return BinaryMeasurementT(psi.projector()); }

  Eigen::Index dim() const { return accept_.rows(); }
  const MatrixC<Real>& accept_operator() const { return accept_; }

  /// Probability of outcome 0 on rho, i.e. <mu(0), rho>.
  Real accept_probability(const DensityOperatorT<Real>& rho) const {
    detail::require_same_dim(dim(), rho.dim(), "accept_probability");
    return (accept_.cwiseProduct(rho.matrix().transpose())).sum().real();
  }

 private:
  MatrixC<Real> accept_;
};

using PureState = PureStateT<double>;
using DensityOperator = DensityOperatorT<double>;
using BinaryMeasurement = BinaryMeasurementT<double>;

template <typename Real>
DensityOperatorT<Real> tensor(const DensityOperatorT<Real>& a, const DensityOperatorT<Real>& b) {
  return DensityOperatorT<Real>(MatrixC<Real>(Eigen::kroneckerProduct(a.matrix(), b.matrix())));
}

template <typename Real>
PureStateT<Real> tensor(const PureStateT<Real>& a, const PureStateT<Real>& b) {
  return PureStateT<Real>(VectorC<Real>(Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes())));
}

/// k-fold tensor power of a matrix or vector expression.
template <typename Derived>
auto kron_power(const Eigen::MatrixBase<Derived>& m, int k) {
  using Plain = typename Derived::PlainObject;
  Plain out = Plain::Ones(1, 1);
  for (int i = 0; i < k; ++i) out = Plain(Eigen::kroneckerProduct(out, m.derived()));
  return out;
}

template <typename Real>
DensityOperatorT<Real> tensor_power(const DensityOperatorT<Real>& a, int k) {
  if (k < 1) throw ValidationError("tensor_power: k must be >= 1");
  return DensityOperatorT<Real>(kron_power(a.matrix(), k));
}

template <typename Real>
Real fidelity(const DensityOperatorT<Real>& a, const DensityOperatorT<Real>& b,
              const BasicTolerances<Real>& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "fidelity");
  return std::clamp(fidelity_psd(a.matrix(), b.matrix(), tol.psd), Real(0), Real(1));
}

/// <psi|rho|psi>, the fidelity of a pure state with any density operator.
template <typename Real>
Real fidelity(const PureStateT<Real>& psi, const DensityOperatorT<Real>& rho) {
  detail::require_same_dim(psi.dim(), rho.dim(), "fidelity");
  Real value = (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0).real();
  return std::clamp(value, Real(0), Real(1));
}

template <typename Real>
Real overlap_sq(const PureStateT<Real>& a, const PureStateT<Real>& b) {
  detail::require_same_dim(a.dim(), b.dim(), "overlap_sq");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Half the trace norm of a - b.
template <typename Real>
Real trace_distance(const DensityOperatorT<Real>& a, const DensityOperatorT<Real>& b) {
  detail::require_same_dim(a.dim(), b.dim(), "trace_distance");
  return std::clamp(Real(0.5) * trace_norm_hermitian(a.matrix() - b.matrix()), Real(0), Real(1));
}

/// Projector onto the non-negative eigenspace of a - b.
template <typename Real>
BinaryMeasurementT<Real> helstrom_measurement(const DensityOperatorT<Real>& a, const DensityOperatorT<Real>& b) {
  detail::require_same_dim(a.dim(), b.dim(), "helstrom_measurement");
  Eigen::SelfAdjointEigenSolver<MatrixC<Real>> solver(a.matrix() - b.matrix());
  MatrixC<Real> projector = MatrixC<Real>::Zero(a.dim(), a.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    if (solver.eigenvalues()(i) >= Real(0)) {
      auto v = solver.eigenvectors().col(i);
      projector += v * v.adjoint();
    }
  }
  return BinaryMeasurementT<Real>(projector);
}

template <typename Real>
Real distinguishing_advantage(const BinaryMeasurementT<Real>& m, const DensityOperatorT<Real>& a,
                              const DensityOperatorT<Real>& b) {
  detail::require_same_dim(a.dim(), b.dim(), "distinguishing_advantage");
  return std::abs(m.accept_probability(a) - m.accept_probability(b));
}

/// Orthonormal vectors completing the (orthonormal) columns of `span` to a
/// basis, found by Gram-Schmidt over the standard basis in index order.
template <typename Real>
MatrixC<Real> orthonormal_complement(const MatrixC<Real>& span) {
  const Eigen::Index dim = span.rows();
  MatrixC<Real> basis = span;
  MatrixC<Real> out(dim, 0);
  // Standard basis vectors with a residual below this are skipped; at least
  // one vector always clears it while the basis is incomplete.
  const Real threshold = Real(1e-3);
  for (Eigen::Index k = 0; k < dim && basis.cols() < dim; ++k) {
    VectorC<Real> v = VectorC<Real>::Zero(dim);
    v(k) = Real(1);
    for (int pass = 0; pass < 2; ++pass) {
      v -= basis * (basis.adjoint() * v);
    }
    Real norm = v.norm();
    if (norm < threshold) continue;
    v /= norm;
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = v;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v;
  }
  return out;
}

/// A unit vector orthogonal to phi (the first completion vector).
template <typename Real>
PureStateT<Real> orthogonal_pure_state(const PureStateT<Real>& phi) {
  if (phi.dim() < 2) throw ValidationError("orthogonal_pure_state: dimension must be >= 2");
  MatrixC<Real> complement = orthonormal_complement<Real>(phi.amplitudes());
  return PureStateT<Real>::normalized(complement.col(0));
}

/// chi = sqrt(c) phi1 + sqrt(1 - c) direction, so that |<phi1|chi>|^2 = c.
template <typename Real>
PureStateT<Real> rotate_overlap(const PureStateT<Real>& phi1, const PureStateT<Real>& direction, Real c,
                                const BasicTolerances<Real>& tol = {}) {
  detail::require_same_dim(phi1.dim(), direction.dim(), "rotate_overlap");
  if (!(c >= Real(0) && c <= Real(1))) {
    throw ValidationError("rotate_overlap: overlap must lie in [0,1]");
  }
  if (overlap_sq(phi1, direction) > tol.fid) {
    throw ValidationError("rotate_overlap: direction is not orthogonal to phi1");
  }
  VectorC<Real> chi = std::sqrt(c) * phi1.amplitudes() + std::sqrt(Real(1) - c) * direction.amplitudes();
  return PureStateT<Real>::normalized(chi);
}

}  // namespace qsv
