#include "qsv/states.hpp"

#include <numeric>

namespace qsv {

TargetState::TargetState(DensityOperator rho, std::vector<double> spectrum, std::vector<PureState> eigenvectors)
    : rho_(std::move(rho)), spectrum_(std::move(spectrum)), eigenvectors_(std::move(eigenvectors)) {
  ComplexMatrix span(rho_.dim(), static_cast<Eigen::Index>(eigenvectors_.size()));
  for (std::size_t i = 0; i < eigenvectors_.size(); ++i) {
    span.col(static_cast<Eigen::Index>(i)) = eigenvectors_[i].amplitudes();
  }
  complement_ = orthonormal_complement<double>(span);
}

TargetState TargetState::from_density(const DensityOperator& rho, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
  std::vector<double> spectrum;
  std::vector<PureState> vectors;
  for (Eigen::Index i = rho.dim() - 1; i >= 0; --i) {
    double eta = solver.eigenvalues()(i);
    if (eta <= rank_tol) break;
    spectrum.push_back(eta);
    vectors.push_back(PureState::normalized(solver.eigenvectors().col(i)));
  }
  if (spectrum.empty()) throw ValidationError("TargetState: empty support");
  return TargetState(rho, std::move(spectrum), std::move(vectors));
}

TargetState TargetState::pure(const PureState& phi) {
  return TargetState(DensityOperator::from_pure(phi), {1.0}, {phi});
}

TargetState TargetState::basis(Eigen::Index dim, Eigen::Index k) { return pure(PureState::basis(dim, k)); }

TargetState TargetState::diagonal(const std::vector<double>& spectrum, Eigen::Index dim) {
  if (static_cast<Eigen::Index>(spectrum.size()) > dim) {
    throw ValidationError("TargetState::diagonal: spectrum longer than dimension");
  }
  RealVector probs = RealVector::Zero(dim);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (spectrum[i] < 0) throw ValidationError("TargetState::diagonal: negative eigenvalue");
    probs(static_cast<Eigen::Index>(i)) = spectrum[i];
  }
  DensityOperator rho = DensityOperator::diagonal(probs);
  // Keep the constructor's eigenvectors exact: sort basis vectors by weight.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return probs(a) > probs(b); });
  std::vector<double> eta;
  std::vector<PureState> vectors;
  for (Eigen::Index k : order) {
    if (probs(k) <= 0) break;
    eta.push_back(probs(k));
    vectors.push_back(PureState::basis(dim, k));
  }
  return TargetState(rho, std::move(eta), std::move(vectors));
}

ComplexMatrix TargetState::support_projector() const {
  ComplexMatrix p = ComplexMatrix::Zero(dim(), dim());
  for (const auto& v : eigenvectors_) p += v.projector();
  return p;
}

AbortingState::AbortingState(double accept_prob, DensityOperator conditional, const Tolerances& tol)
    : accept_prob_(accept_prob), conditional_(std::move(conditional)) {
  if (accept_prob_ < -tol.trace || accept_prob_ > 1.0 + tol.trace) {
    throw ValidationError("AbortingState: accept probability " + std::to_string(accept_prob_) +
                          " outside [0,1]");
  }
  accept_prob_ = std::clamp(accept_prob_, 0.0, 1.0);
}

AbortingState AbortingState::rejected(Eigen::Index dim) {
  return AbortingState(0.0, DensityOperator::maximally_mixed(dim));
}

AbortingState AbortingState::from_block(const ComplexMatrix& accepted, const Tolerances& tol) {
  ComplexMatrix x = detail::hermitian_part(accepted);
  double p = x.trace().real();
  if (p < -tol.trace || p > 1.0 + tol.trace) {
    throw ValidationError("AbortingState::from_block: accepted weight outside [0,1]");
  }
  if (p <= 0.0) return rejected(x.rows());
  // A near-zero accepted weight amplifies rounding noise in x / p, so the
  // conditional state is rebuilt from the PSD-clamped spectrum of x.
  auto eig = psd_eigen(x, tol.psd);
  double kept = eig.values.sum();
  if (kept <= 0.0) return rejected(x.rows());
  ComplexVector w = (eig.values / kept).cast<std::complex<double>>();
  ComplexMatrix sigma = eig.vectors * w.asDiagonal() * eig.vectors.adjoint();
  return AbortingState(p, DensityOperator(detail::hermitian_part(sigma), tol), tol);
}

DensityOperator AbortingState::block_embedding() const {
  const Eigen::Index d = dim();
  ComplexMatrix m = ComplexMatrix::Zero(d + 1, d + 1);
  m.topLeftCorner(d, d) = accept_prob_ * conditional_.matrix();
  m(d, d) = 1.0 - accept_prob_;
  return DensityOperator(m);
}

AbortingState mix(std::span<const Branch> branches, const Tolerances& tol) {
  if (branches.empty()) throw ValidationError("mix: no branches");
  const Eigen::Index d = branches.front().state.dim();
  double weight_sum = 0.0;
  double accept = 0.0;
  ComplexMatrix block = ComplexMatrix::Zero(d, d);
  for (const auto& b : branches) {
    detail::require_same_dim(d, b.state.dim(), "mix");
    if (b.weight < 0.0 || b.accept_prob < 0.0 || b.accept_prob > 1.0 + tol.trace) {
      throw ValidationError("mix: branch weight or acceptance probability out of range");
    }
    weight_sum += b.weight;
    accept += b.weight * b.accept_prob;
    block += (b.weight * b.accept_prob) * b.state.matrix();
  }
  if (std::abs(weight_sum - 1.0) > tol.trace) {
    throw ValidationError("mix: branch weights sum to " + std::to_string(weight_sum));
  }
  if (accept <= 0.0) return AbortingState::rejected(d);
  AbortingState normalized = AbortingState::from_block(block, tol);
  return AbortingState(accept, normalized.conditional(), tol);
}

DensityOperator ideal_block(const TargetState& target, double p) {
  const Eigen::Index d = target.dim();
  ComplexMatrix m = ComplexMatrix::Zero(d + 1, d + 1);
  m.topLeftCorner(d, d) = p * target.rho().matrix();
  m(d, d) = 1.0 - p;
  return DensityOperator(m);
}

namespace {

double conditional_fidelity(const AbortingState& out, const TargetState& target) {
  detail::require_same_dim(out.dim(), target.dim(), "security functional");
  if (target.is_pure()) return fidelity(target.leading(), out.conditional());
  return fidelity(out.conditional(), target.rho());
}

}  // namespace

double standalone_fidelity_honest(const AbortingState& out, const TargetState& target) {
  if (out.accept_prob() == 0.0) {
    detail::require_same_dim(out.dim(), target.dim(), "standalone_fidelity_honest");
    return 0.0;
  }
  return out.accept_prob() * conditional_fidelity(out, target);
}

IdealOptimum standalone_fidelity_dishonest(const AbortingState& out, const TargetState& target) {
  detail::require_same_dim(out.dim(), target.dim(), "standalone_fidelity_dishonest");
  const double p = out.accept_prob();
  const double a2 = p == 0.0 ? 0.0 : p * conditional_fidelity(out, target);
  const double b2 = 1.0 - p;
  const double total = a2 + b2;
  // total = 0 only when every accepted output is orthogonal to the target.
  if (total <= 0.0) return {0.0, 0.0};
  return {a2 / total, std::min(total, 1.0)};
}

double composable_distance_honest(const AbortingState& out, const TargetState& target) {
  detail::require_same_dim(out.dim(), target.dim(), "composable_distance_honest");
  const double p = out.accept_prob();
  ComplexMatrix diff = p * out.conditional().matrix() - target.rho().matrix();
  return std::clamp(0.5 * trace_norm_hermitian(diff) + 0.5 * (1.0 - p), 0.0, 1.0);
}

IdealOptimum composable_distance_dishonest(const AbortingState& out, const TargetState& target) {
  detail::require_same_dim(out.dim(), target.dim(), "composable_distance_dishonest");
  const double p = out.accept_prob();
  if (p == 0.0) return {0.0, 0.0};
  return {p, p * trace_distance(out.conditional(), target.rho())};
}

}  // namespace qsv
