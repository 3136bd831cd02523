#pragma once

// Target states and the abort-sector algebra p*sigma (+) (1-p).

#include <span>
#include <vector>

#include "qsv/core.hpp"

namespace qsv {

/// A target state together with its spectral decomposition
/// rho = sum_i eta_i |phi_i><phi_i|, eta_1 >= eta_2 >= ... > 0.
class TargetState {
 public:
  /// Eigenvalues at or below `rank_tol` are treated as outside the support.
  static TargetState from_density(const DensityOperator& rho, double rank_tol = 1e-10);
  static TargetState pure(const PureState& phi);
  static TargetState basis(Eigen::Index dim, Eigen::Index k);
  /// diag(spectrum) padded with zeros up to `dim`.
  static TargetState diagonal(const std::vector<double>& spectrum, Eigen::Index dim);

  Eigen::Index dim() const { return rho_.dim(); }
  const DensityOperator& rho() const { return rho_; }
  const std::vector<double>& spectrum() const { return spectrum_; }
  const std::vector<PureState>& eigenvectors() const { return eigenvectors_; }
  Eigen::Index rank() const { return static_cast<Eigen::Index>(spectrum_.size()); }
  bool is_pure() const { return rank() == 1; }
  double eta1() const { return spectrum_.front(); }
  const PureState& leading() const { return eigenvectors_.front(); }

  /// Projector onto the span of the eigenvectors.
  ComplexMatrix support_projector() const;
  /// Orthonormal completion of the eigenbasis, in index order; empty when the
  /// target has full rank.
  const ComplexMatrix& complement() const { return complement_; }

 private:
  TargetState(DensityOperator rho, std::vector<double> spectrum, std::vector<PureState> eigenvectors);

  DensityOperator rho_;
  std::vector<double> spectrum_;
  std::vector<PureState> eigenvectors_;
  ComplexMatrix complement_;
};

/// The average protocol output p*sigma (+) (1-p): acceptance probability p and
/// the normalized conditional output sigma. When p = 0 sigma is a placeholder.
class AbortingState {
 public:
  AbortingState(double accept_prob, DensityOperator conditional, const Tolerances& tol = {});

  /// Builds the state from the sub-normalized accepted block X = p*sigma.
  static AbortingState from_block(const ComplexMatrix& accepted, const Tolerances& tol = {});
  /// p = 0 with the maximally mixed placeholder.
  static AbortingState rejected(Eigen::Index dim);

  double accept_prob() const { return accept_prob_; }
  const DensityOperator& conditional() const { return conditional_; }
  Eigen::Index dim() const { return conditional_.dim(); }

  /// The explicit (dim+1)-dimensional operator with the abort sector as the
  /// last basis vector.
  DensityOperator block_embedding() const;

 private:
  double accept_prob_;
  DensityOperator conditional_;
};

struct Branch {
  double weight;
  double accept_prob;
  DensityOperator state;
};

/// Average over branches: (sum q p rho) (+) sum q (1-p).
AbortingState mix(std::span<const Branch> branches, const Tolerances& tol = {});

/// Explicit block operator p*phi (+) (1-p) of the ideal resource.
DensityOperator ideal_block(const TargetState& target, double p);

/// Maximizer (or minimizer) over the ideal acceptance probability.
struct IdealOptimum {
  double best_p;
  double value;
};

/// F(p sigma (+) (1-p), phi (+) 0) = p F(sigma, phi).
double standalone_fidelity_honest(const AbortingState& out, const TargetState& target);

/// max_p F(rho_D, p phi (+) (1-p)) = a^2 + b^2 with a^2 = p_acc F(sigma, phi),
/// b^2 = 1 - p_acc, attained at p = a^2 / (a^2 + b^2).
IdealOptimum standalone_fidelity_dishonest(const AbortingState& out, const TargetState& target);

/// (1/2)||p sigma - phi||_1 + (1/2)(1 - p).
double composable_distance_honest(const AbortingState& out, const TargetState& target);

/// min_p (1/2)||rho_D - p phi (+) (1-p)||_1 = (p_acc/2)||sigma - phi||_1 at p = p_acc.
IdealOptimum composable_distance_dishonest(const AbortingState& out, const TargetState& target);

}  // namespace qsv
