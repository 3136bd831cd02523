#include "qsv/oracle.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "qsv/attacks.hpp"
#include "qsv/bounds.hpp"
#include "qsv/random.hpp"

namespace qsv {
namespace {

std::string fmt(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class Witness {
 public:
  Witness& add(const char* key, double value) {
    if (!text_.empty()) text_ += ' ';
    text_ += key;
    text_ += '=';
    text_ += fmt(value);
    return *this;
  }
  std::string str() const { return text_; }

 private:
  std::string text_;
};

/// Running maximum of per-sample violations.
class Tracker {
 public:
  Tracker(std::string name, double tolerance) : name_(std::move(name)), tolerance_(tolerance) {}

  void record(double violation, const Witness& witness) {
    if (!(violation >= 0.0)) violation = std::isnan(violation) ? std::numeric_limits<double>::infinity() : 0.0;
    if (samples_ == 0 || violation > worst_) {
      worst_ = violation;
      witness_ = witness.str();
    }
    ++samples_;
  }

  void absorb(const CheckResult& sub) {
    if (samples_ == 0 || sub.worst_violation > worst_) {
      worst_ = sub.worst_violation;
      witness_ = sub.witness;
    }
    samples_ += sub.samples;
  }

  CheckResult result() const {
    return {name_, samples_ > 0 && worst_ <= tolerance_, worst_, tolerance_, samples_, witness_};
  }

 private:
  std::string name_;
  double tolerance_;
  double worst_ = 0.0;
  int samples_ = 0;
  std::string witness_;
};

double excess(double lhs, double rhs) { return std::max(0.0, lhs - rhs); }

std::uint64_t stream_of(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform_real(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random state whose rank is itself random (rank 1 gives a pure state).
DensityOperator random_state(Eigen::Index dim, Rng& rng) {
  return random_density(dim, rng, uniform_int(rng, 1, static_cast<int>(dim)));
}

std::vector<double> random_distribution(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = uniform_real(rng) + 1e-3;
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

/// Rank-`rank` target with randomly rotated eigenvectors.
TargetState random_target(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  if (rank == 1) return TargetState::pure(haar_pure_state(dim, rng));
  const ComplexMatrix u = haar_unitary(dim, rng);
  std::vector<double> eta = random_distribution(static_cast<std::size_t>(rank), rng);
  // Keep every eigenvalue well above the rank cut-off.
  for (auto& e : eta) e = 0.9 * e + 0.1 / static_cast<double>(rank);
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < rank; ++i) rho += eta[static_cast<std::size_t>(i)] * u.col(i) * u.col(i).adjoint();
  return TargetState::from_density(DensityOperator(detail::hermitian_part(rho)));
}

double expectation(const PureState& phi, const DensityOperator& rho) {
  return (phi.amplitudes().adjoint() * rho.matrix() * phi.amplitudes())(0, 0).real();
}

ComplexMatrix tensor_all(const std::vector<DensityOperator>& states) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& s : states) out = ComplexMatrix(Eigen::kroneckerProduct(out, s.matrix()));
  return out;
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double binomial_pmf(int n, int i, double p) {
  double c = 1.0;
  for (int k = 1; k <= i; ++k) c = c * (n - i + k) / k;
  return c * std::pow(p, i) * std::pow(1.0 - p, n - i);
}

/// sqrt(1 - a^x)
double concave_g(double a, double x) { return std::sqrt(std::max(0.0, 1.0 - std::pow(a, x))); }

// ---------------------------------------------------------------------------
// Kernel checks

CheckResult check_fvdg_trace_bounds(const OracleConfig& cfg, Rng& rng) {
  Tracker t("fvdg_trace_bounds", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 6);
    const auto a = random_state(d, rng);
    const auto b = random_state(d, rng);
    const double f = fidelity(a, b);
    const double td = trace_distance(a, b);
    t.record(std::max(excess(1.0 - std::sqrt(f), td), excess(td, std::sqrt(1.0 - f))),
             Witness().add("sample", s).add("dim", d).add("F", f).add("T", td));
  }
  return t.result();
}

CheckResult check_fvdg_fidelity_bounds(const OracleConfig& cfg, Rng& rng) {
  Tracker t("fvdg_fidelity_bounds", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 6);
    const auto a = random_state(d, rng);
    const auto b = random_state(d, rng);
    const double f = fidelity(a, b);
    const double td = trace_distance(a, b);
    t.record(std::max(excess((1.0 - td) * (1.0 - td), f), excess(f, 1.0 - td * td)),
             Witness().add("sample", s).add("dim", d).add("F", f).add("T", td));
  }
  return t.result();
}

CheckResult check_fidelity_multiplicativity(const OracleConfig& cfg, Rng& rng) {
  Tracker t("fidelity_multiplicativity", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d1 = uniform_int(rng, 2, 4);
    const Eigen::Index d2 = uniform_int(rng, 2, 3);
    const auto a = random_state(d1, rng);
    const auto b = random_state(d1, rng);
    const auto c = random_state(d2, rng);
    const auto e = random_state(d2, rng);
    const double joint = fidelity(tensor(a, c), tensor(b, e));
    const double product = fidelity(a, b) * fidelity(c, e);
    t.record(std::abs(joint - product), Witness().add("sample", s).add("dim1", d1).add("dim2", d2).add("joint", joint));
  }
  return t.result();
}

CheckResult check_fidelity_pure_identity(const OracleConfig& cfg, Rng& rng) {
  Tracker t("fidelity_pure_identity", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 6);
    const auto psi = haar_pure_state(d, rng);
    const auto rho = random_state(d, rng);
    const double general = fidelity(DensityOperator::from_pure(psi), rho);
    t.record(std::abs(general - expectation(psi, rho)), Witness().add("sample", s).add("dim", d).add("F", general));
  }
  return t.result();
}

CheckResult check_fidelity_symmetry(const OracleConfig& cfg, Rng& rng) {
  Tracker t("fidelity_symmetry", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 6);
    const auto a = random_state(d, rng);
    const auto b = random_state(d, rng);
    t.record(std::abs(fidelity(a, b) - fidelity(b, a)), Witness().add("sample", s).add("dim", d));
  }
  return t.result();
}

CheckResult check_tensor_spectrum(const OracleConfig& cfg, Rng& rng) {
  Tracker t("tensor_spectrum", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d1 = uniform_int(rng, 2, 4);
    const Eigen::Index d2 = uniform_int(rng, 2, 4);
    const auto a = random_state(d1, rng);
    const auto b = random_state(d2, rng);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> sa(a.matrix()), sb(b.matrix()), sab(tensor(a, b).matrix());
    std::vector<double> products;
    for (Eigen::Index i = 0; i < d1; ++i) {
      for (Eigen::Index j = 0; j < d2; ++j) products.push_back(sa.eigenvalues()(i) * sb.eigenvalues()(j));
    }
    std::sort(products.begin(), products.end());
    double worst = 0.0;
    for (std::size_t k = 0; k < products.size(); ++k) {
      worst = std::max(worst, std::abs(products[k] - sab.eigenvalues()(static_cast<Eigen::Index>(k))));
    }
    t.record(worst, Witness().add("sample", s).add("dim1", d1).add("dim2", d2));
  }
  return t.result();
}

ComplexMatrix block_of(const ComplexMatrix& accepted, double rejected) {
  const Eigen::Index d = accepted.rows();
  ComplexMatrix m = ComplexMatrix::Zero(d + 1, d + 1);
  m.topLeftCorner(d, d) = accepted;
  m(d, d) = rejected;
  return m;
}

CheckResult check_fid_oplus_block(const OracleConfig& cfg, Rng& rng) {
  Tracker t("fid_oplus_block", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 5);
    const auto sigma = random_state(d, rng);
    const auto phi = random_state(d, rng);
    const double p = uniform_real(rng);
    const double q = s % 5 == 0 ? p : uniform_real(rng);
    const DensityOperator lhs_a(block_of(p * sigma.matrix(), 1.0 - p));
    const DensityOperator lhs_b(block_of(q * phi.matrix(), 1.0 - q));
    const double block = std::sqrt(fidelity(lhs_a, lhs_b));
    const double split = std::sqrt(p * q * fidelity(sigma, phi)) + std::sqrt((1.0 - p) * (1.0 - q));
    t.record(std::abs(block - split), Witness().add("sample", s).add("dim", d).add("p", p).add("q", q));
  }
  return t.result();
}

CheckResult check_helstrom_saturation(const OracleConfig& cfg, Rng& rng) {
  Tracker t("helstrom_saturation", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 6);
    const auto a = random_state(d, rng);
    const auto b = random_state(d, rng);
    const double adv = distinguishing_advantage(helstrom_measurement(a, b), a, b);
    const double td = trace_distance(a, b);
    t.record(std::abs(adv - td), Witness().add("sample", s).add("dim", d).add("T", td));
  }
  return t.result();
}

CheckResult check_holevo_helstrom(const OracleConfig& cfg, Rng& rng) {
  Tracker t("holevo_helstrom", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 6);
    const auto r0 = random_state(d, rng);
    const auto r1 = random_state(d, rng);
    const double lambda = s % 4 == 0 ? 0.5 : uniform_real(rng);
    const auto mu = random_measurement(d, rng);
    const ComplexMatrix weighted = lambda * r0.matrix() - (1.0 - lambda) * r1.matrix();
    const double rhs = 0.5 + 0.5 * trace_norm_hermitian(weighted);
    auto success = [&](const ComplexMatrix& accept) {
      const double p0 = (accept * r0.matrix()).trace().real();
      const double p1 = (accept * r1.matrix()).trace().real();
      return lambda * p0 + (1.0 - lambda) * (1.0 - p1);
    };
    // Projector onto the non-negative part of the weighted difference.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(weighted);
    ComplexMatrix optimal = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (solver.eigenvalues()(i) >= 0.0) optimal += solver.eigenvectors().col(i) * solver.eigenvectors().col(i).adjoint();
    }
    t.record(std::max(excess(success(mu.accept_operator()), rhs), std::abs(success(optimal) - rhs)),
             Witness().add("sample", s).add("dim", d).add("lambda", lambda));
  }
  return t.result();
}

CheckResult check_distinguishing_bound(const OracleConfig& cfg, Rng& rng) {
  Tracker t("distinguishing_bound", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 6);
    const auto a = random_state(d, rng);
    const auto b = random_state(d, rng);
    const auto mu = random_measurement(d, rng);
    t.record(excess(distinguishing_advantage(mu, a, b), trace_distance(a, b)),
             Witness().add("sample", s).add("dim", d));
  }
  return t.result();
}

CheckResult check_trace_pure(const OracleConfig& cfg, Rng& rng) {
  Tracker t("trace_pure", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 6);
    const auto psi = haar_pure_state(d, rng);
    const auto phi = haar_pure_state(d, rng);
    const double td = trace_distance(DensityOperator::from_pure(psi), DensityOperator::from_pure(phi));
    const double formula = std::sqrt(std::max(0.0, 1.0 - std::norm(psi.amplitudes().dot(phi.amplitudes()))));
    t.record(std::abs(td - formula), Witness().add("sample", s).add("dim", d).add("T", td));
  }
  return t.result();
}

CheckResult check_multicopy_bound(const OracleConfig& cfg, Rng& rng) {
  Tracker t("multicopy_bound", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 3);
    const int k = uniform_int(rng, 1, 4);
    const bool pure = s % 3 == 0;
    std::vector<DensityOperator> rhos, sigmas;
    double fid_product = 1.0;
    for (int i = 0; i < k; ++i) {
      rhos.push_back(pure ? DensityOperator::from_pure(haar_pure_state(d, rng)) : random_state(d, rng));
      sigmas.push_back(pure ? DensityOperator::from_pure(haar_pure_state(d, rng)) : random_state(d, rng));
      fid_product *= fidelity(rhos.back(), sigmas.back());
    }
    const double exact = 0.5 * trace_norm_hermitian(tensor_all(rhos) - tensor_all(sigmas));
    const double bound = std::sqrt(std::max(0.0, 1.0 - fid_product));
    // Pure tuples meet the bound with equality.
    double violation = pure ? std::abs(exact - bound) : excess(exact, bound);
    if (s % 2 == 1) {
      const double copies = exact_multicopy_distance(rhos.front(), sigmas.front(), k, cfg.max_tensor_dim);
      const double f = fidelity(rhos.front(), sigmas.front());
      violation = std::max(violation, excess(copies, std::sqrt(std::max(0.0, 1.0 - std::pow(f, k)))));
    }
    t.record(violation, Witness().add("sample", s).add("dim", d).add("k", k).add("pure", pure));
  }
  return t.result();
}

CheckResult check_accept_gap_chain(const OracleConfig& cfg, Rng& rng) {
  Tracker t("accept_gap_chain", cfg.tolerance);
  const int samples = cfg.sample_count;
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 3);
    const int n = uniform_int(rng, 1, d == 2 ? 4 : 3);
    const TargetState target = random_target(d, uniform_int(rng, 1, static_cast<int>(d)), rng);
    const auto psi = random_state(d, rng);
    const Eigen::Index big = static_cast<Eigen::Index>(std::pow(d, n));
    ExplicitMeasurements family;
    for (int i = 0; i <= n; ++i) family.push_back(random_measurement(big, rng));
    const auto omega = random_distribution(static_cast<std::size_t>(n) + 1, rng);
    const FixedProtocol protocol(target, n, omega, family);

    const double p_h = run_fixed(protocol, Honest{}).accept_prob();
    const double p_d = run_fixed(protocol, IidAttack{psi}).accept_prob();
    const ComplexMatrix phi_n = kron_power(target.rho().matrix(), n);
    const ComplexMatrix psi_n = kron_power(psi.matrix(), n);
    double averaged = 0.0;
    for (int i = 0; i <= n; ++i) {
      const auto& mu = family[static_cast<std::size_t>(i)].accept_operator();
      averaged += omega[static_cast<std::size_t>(i)] *
                  std::abs((mu * phi_n).trace().real() - (mu * psi_n).trace().real());
    }
    const double td = 0.5 * trace_norm_hermitian(phi_n - psi_n);
    const double bound = std::sqrt(std::max(0.0, 1.0 - std::pow(fidelity(target.rho(), psi), n)));
    t.record(std::max({excess(std::abs(p_h - p_d), averaged), excess(averaged, td), excess(td, bound)}),
             Witness().add("sample", s).add("dim", d).add("N", n).add("rank", static_cast<double>(target.rank())));
  }
  return t.result();
}

CheckResult check_midpoint_concavity(const OracleConfig& cfg, Rng& rng) {
  Tracker t("midpoint_concavity", cfg.tolerance);
  constexpr double kBases[] = {0.1, 0.5, 0.9};
  for (int s = 0; s < cfg.sample_count; ++s) {
    const double a = kBases[s % 3];
    double x = uniform_real(rng, 0.0, 50.0);
    double y = uniform_real(rng, 0.0, 50.0);
    if (x > y) std::swap(x, y);
    const double mid = concave_g(a, 0.5 * (x + y));
    const double avg = 0.5 * (concave_g(a, x) + concave_g(a, y));
    t.record(excess(avg, mid), Witness().add("a", a).add("x", x).add("y", y));
  }
  return t.result();
}

CheckResult check_jensen_binomial(const OracleConfig& cfg, Rng& rng) {
  Tracker t("jensen_binomial", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const double a = uniform_real(rng);
    const int n = uniform_int(rng, 1, 40);
    const double p = uniform_real(rng);
    double expected = 0.0;
    for (int i = 0; i <= n; ++i) expected += binomial_pmf(n, i, p) * concave_g(a, i);
    t.record(excess(expected, concave_g(a, n * p)), Witness().add("a", a).add("n", n).add("p", p));
  }
  return t.result();
}

// ---------------------------------------------------------------------------
// Ideal-p optimization against the closed forms

AbortingState random_output(Eigen::Index d, const TargetState& target, int s, Rng& rng) {
  switch (s % 6) {
    case 0: return AbortingState(uniform_real(rng), target.rho());
    case 1: return AbortingState(1.0, random_state(d, rng));
    case 2: return AbortingState(0.0, random_state(d, rng));
    default: return AbortingState(uniform_real(rng), random_state(d, rng));
  }
}

CheckResult check_ideal_grid(const std::string& name, Definition def, const OracleConfig& cfg, Rng& rng) {
  Tracker t(name, std::max(cfg.grid_tolerance, cfg.tolerance));
  const int samples = std::min(cfg.sample_count, 40);
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 4);
    const TargetState target = random_target(d, uniform_int(rng, 1, static_cast<int>(d)), rng);
    const AbortingState out = random_output(d, target, s, rng);
    const IdealOptimum closed = def == Definition::standalone ? standalone_fidelity_dishonest(out, target)
                                                              : composable_distance_dishonest(out, target);
    const IdealOptimum grid = grid_max_ideal_p(out, target, def, cfg.grid_points);
    const IdealOptimum refined = refined_ideal_p(out, target, def, cfg.grid_points);
    // The grid can never beat the true optimum.
    const double beyond = def == Definition::standalone ? excess(grid.value, closed.value)
                                                        : excess(closed.value, grid.value);
    t.record(std::max(beyond, std::abs(refined.value - closed.value)),
             Witness().add("sample", s).add("dim", d).add("p_acc", out.accept_prob()).add("closed", closed.value)
                 .add("grid", grid.value).add("refined", refined.value));
  }
  return t.result();
}

CheckResult check_standalone_grid(const OracleConfig& cfg, Rng& rng) {
  return check_ideal_grid("standalone_grid", Definition::standalone, cfg, rng);
}

CheckResult check_composable_grid(const OracleConfig& cfg, Rng& rng) {
  return check_ideal_grid("composable_grid", Definition::composable, cfg, rng);
}

// ---------------------------------------------------------------------------
// Protocol engine and security evaluation

std::vector<DensityOperator> random_separable(const TargetState& target, int rounds, Rng& rng) {
  std::vector<DensityOperator> states;
  for (int j = 0; j < rounds; ++j) {
    switch (uniform_int(rng, 0, 3)) {
      case 0: states.push_back(target.rho()); break;
      case 1: {
        // A small perturbation of the target.
        const double w = uniform_real(rng, 0.0, 0.2);
        ComplexMatrix m = (1.0 - w) * target.rho().matrix() + w * random_state(target.dim(), rng).matrix();
        states.push_back(DensityOperator(m));
        break;
      }
      default: states.push_back(random_state(target.dim(), rng));
    }
  }
  return states;
}

CheckResult check_standalone_separable(const OracleConfig& cfg, Rng& rng) {
  Tracker t("standalone_separable_closed_form", cfg.tolerance);
  const int samples = std::min(cfg.sample_count, 200);
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 4);
    const int n = uniform_int(rng, 1, 6);
    const TargetState target = TargetState::pure(haar_pure_state(d, rng));
    const auto omega = random_distribution(static_cast<std::size_t>(n) + 1, rng);
    const FixedProtocol protocol(target, n, omega, ProductMeasurement::project_onto(target));
    const SeparableAttack attack{random_separable(target, n + 1, rng)};

    std::vector<double> f;
    for (const auto& psi : attack.states) f.push_back(expectation(target.leading(), psi));
    double closed_form = 0.0;
    for (int i = 0; i <= n; ++i) {
      double p_d = 1.0;
      for (int j = 0; j <= n; ++j) {
        if (j != i) p_d *= f[static_cast<std::size_t>(j)];
      }
      closed_form += omega[static_cast<std::size_t>(i)] * p_d * (1.0 - f[static_cast<std::size_t>(i)]);
    }
    const auto report = evaluate_standalone(protocol, attack);
    const auto out = run_fixed(protocol, attack);
    const double identity = 1.0 - out.accept_prob() * (1.0 - fidelity(target.leading(), out.conditional()));
    const double value = standalone_fidelity_dishonest(out, target).value;
    t.record(std::max({std::abs(report.eps_d - closed_form), std::abs(separable_standalone_eps_d(protocol, attack) - closed_form),
                       std::abs(value - identity)}),
             Witness().add("sample", s).add("dim", d).add("N", n).add("eps_d", report.eps_d).add("closed_form", closed_form));
  }
  return t.result();
}

CheckResult check_composable_separable(const OracleConfig& cfg, Rng& rng) {
  Tracker t("composable_separable_closed_form", cfg.tolerance);
  const int samples = std::min(cfg.sample_count, 200);
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 4);
    const int n = uniform_int(rng, 1, 6);
    const TargetState target = random_target(d, uniform_int(rng, 1, static_cast<int>(d)), rng);
    const auto omega = random_distribution(static_cast<std::size_t>(n) + 1, rng);
    const FixedProtocol protocol(target, n, omega, ProductMeasurement::project_onto_support(target));
    const SeparableAttack attack{random_separable(target, n + 1, rng)};

    const ComplexMatrix support = target.support_projector();
    std::vector<double> f;
    for (const auto& psi : attack.states) f.push_back((support * psi.matrix()).trace().real());
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (int i = 0; i <= n; ++i) {
      double p_d = 1.0;
      for (int j = 0; j <= n; ++j) {
        if (j != i) p_d *= f[static_cast<std::size_t>(j)];
      }
      sum += omega[static_cast<std::size_t>(i)] * p_d *
             (attack.states[static_cast<std::size_t>(i)].matrix() - target.rho().matrix());
    }
    const double closed_form = 0.5 * trace_norm_hermitian(sum);
    const auto report = evaluate_composable(protocol, attack);
    t.record(std::max(std::abs(report.eps_d - closed_form), std::abs(separable_composable_eps_d(protocol, attack) - closed_form)),
             Witness().add("sample", s).add("dim", d).add("N", n).add("eps_d", report.eps_d).add("closed_form", closed_form));
  }
  return t.result();
}

double output_gap(const AbortingState& a, const AbortingState& b) {
  return std::max(std::abs(a.accept_prob() - b.accept_prob()),
                  max_abs(a.accept_prob() * a.conditional().matrix() - b.accept_prob() * b.conditional().matrix()));
}

CheckResult check_separable_accept_explicit(const OracleConfig& cfg, Rng& rng) {
  Tracker t("separable_accept_explicit", cfg.tolerance);
  const int samples = std::min(cfg.sample_count, 200);
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 3);
    const int n = uniform_int(rng, 1, 3);
    const TargetState target = TargetState::pure(haar_pure_state(d, rng));
    const auto symbolic = FixedProtocol::canonical(target, n);
    const BinaryMeasurement projector(kron_power(target.leading().projector(), n));
    const FixedProtocol explicit_protocol(target, n, symbolic.omega(),
                                          ExplicitMeasurements(static_cast<std::size_t>(n) + 1, projector));
    const SeparableAttack attack{random_separable(target, n + 1, rng)};
    const auto a = run_fixed(symbolic, attack);
    const auto b = run_fixed(explicit_protocol, attack);
    double formula = 0.0;
    for (int i = 0; i <= n; ++i) {
      double p = 1.0;
      for (int j = 0; j <= n; ++j) {
        if (j != i) p *= expectation(target.leading(), attack.states[static_cast<std::size_t>(j)]);
      }
      formula += p / (n + 1);
    }
    t.record(std::max(output_gap(a, b), std::abs(a.accept_prob() - formula)),
             Witness().add("sample", s).add("dim", d).add("N", n).add("accept", a.accept_prob()));
  }
  return t.result();
}

CheckResult check_entangled_product_consistency(const OracleConfig& cfg, Rng& rng) {
  Tracker t("entangled_product_consistency", cfg.tolerance);
  const int samples = std::min(cfg.sample_count, 200);
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 3);
    const int n = uniform_int(rng, 1, d == 2 ? 3 : 2);
    const TargetState target = TargetState::pure(haar_pure_state(d, rng));
    const auto protocol = FixedProtocol::canonical(target, n);
    const SeparableAttack separable{random_separable(target, n + 1, rng)};
    const EntangledAttack entangled{DensityOperator(tensor_all(separable.states))};
    t.record(output_gap(run_fixed(protocol, separable), run_fixed(protocol, entangled)),
             Witness().add("sample", s).add("dim", d).add("N", n));
  }
  return t.result();
}

/// Reorders the registers of a joint operator: register k moves to slot perm[k].
ComplexMatrix permute_registers(const ComplexMatrix& joint, Eigen::Index d, const std::vector<int>& perm) {
  const int regs = static_cast<int>(perm.size());
  const Eigen::Index total = joint.rows();
  std::vector<Eigen::Index> map(static_cast<std::size_t>(total));
  std::vector<Eigen::Index> digits(perm.size()), moved(perm.size());
  for (Eigen::Index x = 0; x < total; ++x) {
    Eigen::Index rest = x;
    for (int k = regs - 1; k >= 0; --k) {
      digits[static_cast<std::size_t>(k)] = rest % d;
      rest /= d;
    }
    for (int k = 0; k < regs; ++k) moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = digits[static_cast<std::size_t>(k)];
    Eigen::Index y = 0;
    for (int k = 0; k < regs; ++k) y = y * d + moved[static_cast<std::size_t>(k)];
    map[static_cast<std::size_t>(x)] = y;
  }
  ComplexMatrix out(total, total);
  for (Eigen::Index c = 0; c < total; ++c) {
    for (Eigen::Index r = 0; r < total; ++r) out(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = joint(r, c);
  }
  return out;
}

CheckResult check_entangled_permutation_symmetry(const OracleConfig& cfg, Rng& rng) {
  Tracker t("entangled_permutation_symmetry", cfg.tolerance);
  const int samples = std::min(cfg.sample_count, 200);
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index d = 2;
    const int n = uniform_int(rng, 1, 3);
    const TargetState target = TargetState::pure(haar_pure_state(d, rng));
    const auto protocol = FixedProtocol::canonical(target, n);
    const Eigen::Index total = static_cast<Eigen::Index>(std::pow(d, n + 1));
    const auto joint = random_density(total, rng, uniform_int(rng, 1, 4));
    std::vector<int> perm(static_cast<std::size_t>(n) + 1);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const DensityOperator permuted(permute_registers(joint.matrix(), d, perm));
    t.record(output_gap(run_fixed(protocol, EntangledAttack{joint}), run_fixed(protocol, EntangledAttack{permuted})),
             Witness().add("sample", s).add("N", n));
  }
  return t.result();
}

CheckResult check_entangled_ceiling(const OracleConfig& cfg, Rng& rng) {
  Tracker t("entangled_ceiling", cfg.tolerance);
  const int samples = std::min(cfg.sample_count, 100);
  for (int n = 1; n <= 3; ++n) {
    t.absorb(entangled_attack_sweep(n, 2, samples, rng(), cfg));
  }
  return t.result();
}

// ---------------------------------------------------------------------------
// Bounds

CheckResult check_b_n_upper(const OracleConfig& cfg, Rng& rng) {
  Tracker t("b_n_upper", cfg.tolerance);
  const int samples = 200 * cfg.sample_count;
  for (int s = 0; s < samples; ++s) {
    const int n = uniform_int(rng, 1, 6);
    std::vector<double> f(static_cast<std::size_t>(n) + 1);
    for (auto& x : f) {
      const double u = uniform_real(rng);
      x = u < 0.05 ? 0.0 : (u < 0.1 ? 1.0 : uniform_real(rng));
    }
    const auto omega = random_distribution(f.size(), rng);
    const double value = b_n(f, omega);
    t.record(excess(value, *std::max_element(omega.begin(), omega.end())),
             Witness().add("sample", s).add("N", n).add("B", value));
  }
  return t.result();
}

CheckResult check_b_n_grid(const OracleConfig&, Rng&) {
  Tracker t("b_n_grid", 1e-12);
  for (int n = 2; n <= 3; ++n) {
    const int len = n + 1;
    const std::vector<double> omega(static_cast<std::size_t>(len), 1.0 / len);
    std::vector<int> idx(static_cast<std::size_t>(len), 0);
    std::vector<double> f(static_cast<std::size_t>(len));
    double best = -1.0;
    double above_max_omega = 0.0;
    while (true) {
      for (int k = 0; k < len; ++k) f[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k)] / 20.0;
      const double v = b_n(f, omega);
      best = std::max(best, v);
      above_max_omega = std::max(above_max_omega, excess(v, 1.0 / len));
      int k = 0;
      while (k < len && ++idx[static_cast<std::size_t>(k)] > 20) idx[static_cast<std::size_t>(k++)] = 0;
      if (k == len) break;
    }
    std::vector<double> naive(static_cast<std::size_t>(len), 1.0);
    naive[0] = 0.0;
    const double at_naive = b_n(naive, omega);
    t.record(std::max({std::abs(best - at_naive), std::abs(at_naive - 1.0 / len), above_max_omega}),
             Witness().add("N", n).add("grid_max", best).add("naive", at_naive));
  }
  return t.result();
}

CheckResult check_reciprocal_sum_product(const OracleConfig& cfg, Rng& rng) {
  Tracker t("reciprocal_sum_product", cfg.tolerance);
  const int samples = 200 * cfg.sample_count;
  for (int s = 0; s < samples; ++s) {
    const int n = uniform_int(rng, 1, 6);
    double lhs = 0.0;
    double rhs = 1.0;
    for (int i = 0; i <= n; ++i) {
      const double f = 1.0 - uniform_real(rng);  // (0, 1]
      lhs += 1.0 / f - 1.0;
      rhs /= f;
    }
    t.record(excess(lhs, rhs) / std::max(1.0, rhs), Witness().add("sample", s).add("N", n));
  }
  return t.result();
}

CheckResult check_h_alpha_argmax(const OracleConfig& cfg, Rng&) {
  Tracker t("h_alpha_argmax", cfg.tolerance);
  const int g = cfg.grid_points;
  for (int n = 1; n <= 100; ++n) {
    double best = -1.0;
    double best_alpha = 0.0;
    for (int k = 1; k <= g; ++k) {
      const double alpha = static_cast<double>(k) / g;
      const double h = standalone_pre_bound(alpha, n);
      if (h > best) {
        best = h;
        best_alpha = alpha;
      }
    }
    const double peak = standalone_pre_bound(4.0 / 9.0, n);
    t.record(std::max({excess(std::abs(best_alpha - 4.0 / 9.0), 1.0 / g), excess(best, peak),
                       std::abs(peak - 4.0 / (27.0 * n))}),
             Witness().add("N", n).add("argmax", best_alpha));
  }
  return t.result();
}

CheckResult check_kappa_conversion(const OracleConfig& cfg, Rng&) {
  Tracker t("kappa_conversion", cfg.tolerance);
  for (int n = 1; n <= 1000; ++n) {
    const double kappa = 1.0 - std::sqrt(1.0 - 1.0 / (n + 1.0));
    t.record(std::abs(composable_from_kappa(kappa) - canonical_security_values(n).composable), Witness().add("N", n));
  }
  return t.result();
}

// ---------------------------------------------------------------------------
// Attacks

CheckResult check_iid_standalone_fidelity(const OracleConfig& cfg, Rng& rng) {
  Tracker t("iid_standalone_fidelity", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 5);
    const int n = uniform_int(rng, 1, 64);
    const double alpha = s % 2 == 0 ? kStandaloneAlpha : 1.0 - uniform_real(rng);
    const TargetState target = TargetState::pure(haar_pure_state(d, rng));
    const auto recipe = iid_standalone_attack(target, n, alpha);
    const auto& psi = std::get<IidAttack>(recipe.resolved).state;
    const double f = fidelity(target.rho(), psi);
    t.record(std::abs(f - (1.0 - alpha / n)), Witness().add("dim", d).add("N", n).add("alpha", alpha).add("F", f));
  }
  return t.result();
}

struct MixedCase {
  TargetState target;
  int rounds;
  double alpha;
};

MixedCase random_composable_case(Eigen::Index d, Rng& rng, int max_rounds) {
  const Eigen::Index rank = uniform_int(rng, 1, static_cast<int>(d) - 1);
  TargetState target = random_target(d, rank, rng);
  const int rounds = uniform_int(rng, 1, max_rounds);
  const double cap = std::min(1.0, std::sqrt(target.eta1() * rounds));
  const double alpha = uniform_int(rng, 0, 1) == 0 ? std::min(kComposableAlpha, cap) : cap * (1.0 - uniform_real(rng));
  return {std::move(target), rounds, alpha};
}

CheckResult check_iid_composable_distance(const OracleConfig& cfg, Rng& rng) {
  Tracker t("iid_composable_distance", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 5);
    const auto c = random_composable_case(d, rng, 64);
    const auto recipe = iid_composable_attack(c.target, c.rounds, c.alpha);
    const auto& psi = std::get<IidAttack>(recipe.resolved).state;
    const double eta1 = c.target.eta1();
    const double expected = eta1 * c.alpha / std::sqrt(eta1 * c.rounds);
    t.record(std::abs(trace_distance(c.target.rho(), psi) - expected),
             Witness().add("dim", d).add("rank", static_cast<double>(c.target.rank())).add("N", c.rounds)
                 .add("alpha", c.alpha));
  }
  return t.result();
}

CheckResult check_composable_multicopy_bound(const OracleConfig& cfg, Rng& rng) {
  Tracker t("composable_multicopy_bound", cfg.tolerance);
  const int samples = std::min(cfg.sample_count, 200);
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 3);
    const int k = uniform_int(rng, 1, 4);
    const auto c = random_composable_case(d, rng, 8);
    const auto recipe = iid_composable_attack(c.target, c.rounds, c.alpha);
    const auto& psi = std::get<IidAttack>(recipe.resolved).state;
    const double eta1 = c.target.eta1();
    const double overlap = 1.0 - c.alpha * c.alpha / (eta1 * c.rounds);
    const double exact = exact_multicopy_distance(c.target.rho(), psi, k, cfg.max_tensor_dim);
    double binomial = 0.0;
    for (int i = 0; i <= k; ++i) binomial += binomial_pmf(k, i, eta1) * concave_g(overlap, i);
    const double jensen = concave_g(overlap, eta1 * k);
    t.record(std::max(excess(exact, binomial), excess(binomial, jensen)),
             Witness().add("dim", d).add("k", k).add("eta1", eta1).add("overlap", overlap).add("exact", exact));
  }
  return t.result();
}

CheckResult check_canonical_exactness(const OracleConfig& cfg, Rng& rng) {
  Tracker t("canonical_exactness", cfg.tolerance);
  for (Eigen::Index d = 2; d <= 3; ++d) {
    for (int n = 1; n <= 32; ++n) {
      const TargetState target = TargetState::pure(haar_pure_state(d, rng));
      const auto protocol = FixedProtocol::canonical(target, n);
      const auto recipe = naive_attack(protocol);
      const auto sa = evaluate_standalone(protocol, recipe.resolved);
      const auto co = evaluate_composable(protocol, recipe.resolved);
      const double expected = 1.0 / (n + 1);
      const auto out = run_fixed(protocol, recipe.resolved);
      t.record(std::max({sa.eps_h, co.eps_h, std::abs(sa.eps_d - expected), std::abs(co.eps_d - expected),
                         std::abs(out.accept_prob() - expected), fidelity(target.leading(), out.conditional())}),
               Witness().add("dim", d).add("N", n).add("eps_d_sa", sa.eps_d).add("eps_d_co", co.eps_d));
    }
  }
  return t.result();
}

CheckResult check_iid_composable_trace_identity(const OracleConfig& cfg, Rng& rng) {
  Tracker t("iid_composable_trace_identity", cfg.tolerance);
  for (int s = 0; s < cfg.sample_count; ++s) {
    const Eigen::Index d = uniform_int(rng, 2, 5);
    const int n = uniform_int(rng, 1, 40);
    const TargetState target = TargetState::pure(haar_pure_state(d, rng));
    const auto psi = random_state(d, rng);
    const auto report = evaluate_composable(FixedProtocol::canonical(target, n), IidAttack{psi});
    const double expected = std::pow(expectation(target.leading(), psi), n) * trace_distance(psi, target.rho());
    t.record(std::abs(report.eps_d - expected), Witness().add("dim", d).add("N", n).add("eps_d", report.eps_d));
  }
  return t.result();
}

CheckResult check_iid_attack_closed_forms(const OracleConfig& cfg, Rng&) {
  Tracker t("iid_attack_closed_forms", cfg.tolerance);
  const TargetState target = TargetState::basis(2, 0);
  for (int n = 1; n <= 64; ++n) {
    const auto protocol = FixedProtocol::canonical(target, n);
    const auto sa = evaluate_standalone(protocol, iid_standalone_attack(target, n).resolved);
    const double tau = 4.0 / (9.0 * n);
    const double sa_closed = std::pow(1.0 - tau, n) * tau;
    const auto co = evaluate_composable(protocol, iid_composable_attack(target, n).resolved);
    const double co_closed = std::pow(1.0 - 0.25 / n, n) * 0.5 / std::sqrt(n);
    t.record(std::max({std::abs(sa.eps_sum() - sa_closed), std::abs(co.eps_sum() - co_closed),
                       excess(4.0 / (27.0 * n), sa.eps_sum()), excess(1.0 / (4.0 * std::sqrt(n)), co.eps_sum())}),
             Witness().add("N", n).add("standalone", sa.eps_sum()).add("composable", co.eps_sum()));
  }
  return t.result();
}

CheckResult check_variable_round_bounds(const OracleConfig& cfg, Rng& rng) {
  Tracker t("variable_round_bounds", cfg.tolerance);
  for (int mean : {5, 10, 20}) {
    for (int family = 0; family < 2; ++family) {
      const auto dist = family == 0 ? RoundDistribution::truncated_geometric_with_mean(mean, 20 * mean)
                                    : RoundDistribution::uniform(0, 2 * mean);
      const TargetState target = TargetState::pure(haar_pure_state(uniform_int(rng, 2, 3), rng));
      const auto protocol = VariableProtocol::canonical(target, dist);
      const double e = protocol.expected_rounds();
      const auto sa = evaluate_standalone(protocol, iid_standalone_attack(target, e).resolved);
      const auto co = evaluate_composable(protocol, iid_composable_attack(target, e).resolved);
      t.record(std::max({excess(1.0 / (7.0 * e), sa.eps_sum()), excess(1.0 / (4.0 * std::sqrt(e)), co.eps_sum()),
                         std::abs(e - mean)}),
               Witness().add("mean", mean).add("family", family).add("standalone", sa.eps_sum())
                   .add("composable", co.eps_sum()));
    }
  }
  return t.result();
}

CheckResult check_crossover(const OracleConfig& cfg, Rng&) {
  Tracker t("crossover", cfg.tolerance);
  for (const auto& row : crossover_scan(17, 32)) {
    t.record(std::max(excess(row.naive_sum, row.iid_sum), std::abs(row.naive_sum - 1.0 / (row.n + 1))),
             Witness().add("N", row.n).add("naive", row.naive_sum).add("iid", row.iid_sum));
  }
  return t.result();
}

using CheckFn = CheckResult (*)(const OracleConfig&, Rng&);

struct Registered {
  const char* name;
  CheckFn fn;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> checks = {
      {"fvdg_trace_bounds", check_fvdg_trace_bounds},
      {"fvdg_fidelity_bounds", check_fvdg_fidelity_bounds},
      {"fidelity_multiplicativity", check_fidelity_multiplicativity},
      {"fidelity_pure_identity", check_fidelity_pure_identity},
      {"fidelity_symmetry", check_fidelity_symmetry},
      {"tensor_spectrum", check_tensor_spectrum},
      {"fid_oplus_block", check_fid_oplus_block},
      {"helstrom_saturation", check_helstrom_saturation},
      {"holevo_helstrom", check_holevo_helstrom},
      {"distinguishing_bound", check_distinguishing_bound},
      {"trace_pure", check_trace_pure},
      {"multicopy_bound", check_multicopy_bound},
      {"accept_gap_chain", check_accept_gap_chain},
      {"midpoint_concavity", check_midpoint_concavity},
      {"jensen_binomial", check_jensen_binomial},
      {"standalone_grid", check_standalone_grid},
      {"composable_grid", check_composable_grid},
      {"standalone_separable_closed_form", check_standalone_separable},
      {"composable_separable_closed_form", check_composable_separable},
      {"separable_accept_explicit", check_separable_accept_explicit},
      {"entangled_product_consistency", check_entangled_product_consistency},
      {"entangled_permutation_symmetry", check_entangled_permutation_symmetry},
      {"entangled_ceiling", check_entangled_ceiling},
      {"b_n_upper", check_b_n_upper},
      {"b_n_grid", check_b_n_grid},
      {"reciprocal_sum_product", check_reciprocal_sum_product},
      {"h_alpha_argmax", check_h_alpha_argmax},
      {"kappa_conversion", check_kappa_conversion},
      {"iid_standalone_fidelity", check_iid_standalone_fidelity},
      {"iid_composable_distance", check_iid_composable_distance},
      {"composable_multicopy_bound", check_composable_multicopy_bound},
      {"canonical_exactness", check_canonical_exactness},
      {"iid_composable_trace_identity", check_iid_composable_trace_identity},
      {"iid_attack_closed_forms", check_iid_attack_closed_forms},
      {"variable_round_bounds", check_variable_round_bounds},
      {"crossover", check_crossover},
  };
  return checks;
}

/// Objective on the explicit block operators; larger is better for both.
class BlockObjective {
 public:
  BlockObjective(const AbortingState& out, const TargetState& target, Definition def)
      : def_(def), rho_d_(out.block_embedding().matrix()), phi_(target.rho().matrix()) {
    detail::require_same_dim(out.dim(), target.dim(), "grid_max_ideal_p");
    if (def_ == Definition::standalone) {
      sqrt_rho_ = psd_sqrt(rho_d_);
      sqrt_phi_ = psd_sqrt(phi_);
    }
  }

  double operator()(double p) const {
    if (def_ == Definition::standalone) {
      // sqrt(p phi (+) (1-p)) = sqrt(p) sqrt(phi) (+) sqrt(1-p)
      ComplexMatrix sqrt_ideal = block_of(std::sqrt(p) * sqrt_phi_, std::sqrt(1.0 - p));
      Eigen::JacobiSVD<ComplexMatrix> svd(sqrt_rho_ * sqrt_ideal);
      const double nuclear = svd.singularValues().sum();
      return nuclear * nuclear;
    }
    return -0.5 * trace_norm_hermitian(rho_d_ - block_of(p * phi_, 1.0 - p));
  }

  double value(double objective) const { return def_ == Definition::standalone ? objective : -objective; }

 private:
  Definition def_;
  ComplexMatrix rho_d_;
  ComplexMatrix phi_;
  ComplexMatrix sqrt_rho_;
  ComplexMatrix sqrt_phi_;
};

struct GridResult {
  int best_index;
  double best_objective;
};

GridResult scan_grid(const BlockObjective& objective, int grid_points) {
  if (grid_points < 2) throw ValidationError("grid_max_ideal_p: need at least two grid points");
  GridResult r{0, objective(0.0)};
  for (int k = 1; k < grid_points; ++k) {
    const double v = objective(static_cast<double>(k) / (grid_points - 1));
    if (v > r.best_objective) r = {k, v};
  }
  return r;
}

}  // namespace

void OracleConfig::validate() const {
  if (sample_count < 1 || grid_points < 2 || max_tensor_dim < 1) {
    throw ValidationError("OracleConfig: counts must be positive (grid_points >= 2)");
  }
  if (!(tolerance > 0.0) || !(grid_tolerance > 0.0)) throw ValidationError("OracleConfig: tolerances must be positive");
}

IdealOptimum grid_max_ideal_p(const AbortingState& out, const TargetState& target, Definition definition,
                              int grid_points) {
  const BlockObjective objective(out, target, definition);
  const auto r = scan_grid(objective, grid_points);
  return {static_cast<double>(r.best_index) / (grid_points - 1), objective.value(r.best_objective)};
}

IdealOptimum refined_ideal_p(const AbortingState& out, const TargetState& target, Definition definition,
                             int grid_points) {
  const BlockObjective objective(out, target, definition);
  const auto r = scan_grid(objective, grid_points);
  const double h = 1.0 / (grid_points - 1);
  double lo = std::max(0.0, (r.best_index - 1) * h);
  double hi = std::min(1.0, (r.best_index + 1) * h);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  IdealOptimum best{static_cast<double>(r.best_index) * h, r.best_objective};
  const double mid = 0.5 * (lo + hi);
  const double f_mid = objective(mid);
  if (f_mid > best.value) best = {mid, f_mid};
  return {best.best_p, objective.value(best.value)};
}

double exact_multicopy_distance(const DensityOperator& a, const DensityOperator& b, int k, std::size_t max_tensor_dim) {
  detail::require_same_dim(a.dim(), b.dim(), "exact_multicopy_distance");
  if (k < 1) throw ValidationError("exact_multicopy_distance: k must be >= 1");
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) {
    total *= static_cast<std::size_t>(a.dim());
    if (total > max_tensor_dim) throw SizeCapError("exact_multicopy_distance: tensor dimension exceeds cap");
  }
  return std::min(1.0, 0.5 * trace_norm_hermitian(kron_power(a.matrix(), k) - kron_power(b.matrix(), k)));
}

CheckResult entangled_attack_sweep(int n_verify, Eigen::Index dim, int samples, std::uint64_t seed,
                                   const OracleConfig& config) {
  std::size_t total = 1;
  for (int i = 0; i <= n_verify; ++i) {
    total *= static_cast<std::size_t>(dim);
    if (total > config.max_tensor_dim) throw SizeCapError("entangled_attack_sweep: joint dimension exceeds cap");
  }
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(n_verify) * 1000 + static_cast<std::uint64_t>(dim));
  Tracker t("entangled_ceiling", config.tolerance);
  const double ceiling = 1.0 / (n_verify + 1);
  EngineLimits limits;
  limits.max_explicit_dim = config.max_tensor_dim;
  for (int s = 0; s < samples; ++s) {
    const TargetState target = TargetState::pure(haar_pure_state(dim, rng));
    const auto protocol = FixedProtocol::canonical(target, n_verify, limits);
    const auto joint = random_density(static_cast<Eigen::Index>(total), rng, uniform_int(rng, 1, 4));
    const double eps_d = evaluate_standalone(protocol, EntangledAttack{joint}).eps_d;
    t.record(excess(eps_d, ceiling), Witness().add("sample", s).add("N", n_verify).add("dim", dim).add("eps_d", eps_d));
  }
  return t.result();
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& r : registry()) out.emplace_back(r.name);
    return out;
  }();
  return names;
}

CheckResult run_check(const std::string& name, const OracleConfig& config) {
  config.validate();
  for (const auto& r : registry()) {
    if (name == r.name) {
      Rng rng = make_rng(config.seed, stream_of(name));
      return r.fn(config, rng);
    }
  }
  throw UnknownCheckError("unknown check: " + name);
}

CheckResult inequality_sweep(const std::string& name, int samples, std::uint64_t seed) {
  OracleConfig config;
  config.sample_count = samples;
  config.seed = seed;
  return run_check(name, config);
}

std::vector<CheckResult> run_checks(const std::vector<std::string>& names, const OracleConfig& config) {
  std::vector<CheckResult> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(run_check(n, config));
  return out;
}

std::vector<CheckResult> run_all(const OracleConfig& config) { return run_checks(check_names(), config); }

}  // namespace qsv
