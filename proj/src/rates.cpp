#include "mixrate/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixrate/error.hpp"

namespace mixrate {

namespace {

constexpr double kSupportLeakTol = 1e-9;
const Complex kI{0.0, 1.0};

// ln rho on its support, after checking every member lives inside supp(rho).
ComplexMatrix checked_log_expected(const Ensemble& e, double rank_tol) {
  const DensityMatrix rho = expected_state(e);
  const EigenDecomposition eig = eig_hermitian(rho.matrix());
  const double cut = rank_tol * eig.values.back();
  const bool has_kernel = eig.values.front() <= cut;
  if (has_kernel) {
    const ComplexMatrix kernel =
        apply_spectral(eig, [cut](double l) { return l <= cut ? 1.0 : 0.0; });
    for (std::size_t x = 0; x < e.size(); ++x) {
      const double leak = e.probability(x) * trace_product(kernel, e.state(x).matrix()).real();
      if (leak > kSupportLeakTol) {
        throw Error(ErrorKind::DegenerateState,
                    "member " + std::to_string(x) + " leaves the support of rho");
      }
    }
  }
  return support_log(eig, rank_tol);
}

double real_part_checked(Complex z) {
  if (std::abs(z.imag()) > kImagResidueTol * std::max(1.0, std::abs(z.real()))) {
    throw Error(ErrorKind::DomainError,
                "imaginary residue " + std::to_string(z.imag()) + " in a real trace");
  }
  return z.real();
}

double expected_entropy_at(const Ensemble& e, const HamiltonianSet& hams, double t) {
  return von_neumann_entropy(expected_state(evolve(e, hams, t)));
}

}  // namespace

std::vector<ComplexMatrix> rate_generators(const Ensemble& e, double rank_tol) {
  const ComplexMatrix log_rho = checked_log_expected(e, rank_tol);
  std::vector<ComplexMatrix> out;
  out.reserve(e.size());
  for (const auto& s : e.states()) out.push_back(kI * commutator(s.matrix(), log_rho));
  return out;
}

double mixing_rate(const Ensemble& e, const HamiltonianSet& hams, double rank_tol) {
  require_compatible(e, hams);
  const auto gens = rate_generators(e, rank_tol);
  Complex total = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) {
    total += e.probability(x) * trace_product(hams[x].matrix(), gens[x]);
  }
  return real_part_checked(total);
}

double fd_mixing_rate(const Ensemble& e, const HamiltonianSet& hams, double h, double rank_tol) {
  if (!(h > 0.0)) throw Error(ErrorKind::DomainError, "finite-difference step must be positive");
  require_compatible(e, hams);
  const double lmin = eigenvalues_hermitian(expected_state(e).matrix()).front();
  if (lmin < 1e3 * rank_tol) {
    throw Error(ErrorKind::RankDeficient,
                "smallest eigenvalue of rho is " + std::to_string(lmin));
  }
  return (expected_entropy_at(e, hams, h) - expected_entropy_at(e, hams, -h)) / (2.0 * h);
}

double fd_mixing_rate_richardson(const Ensemble& e, const HamiltonianSet& hams, double h,
                                 double rank_tol) {
  const double coarse = fd_mixing_rate(e, hams, h, rank_tol);
  const double fine = fd_mixing_rate(e, hams, h / 2.0, rank_tol);
  return (4.0 * fine - coarse) / 3.0;
}

HamiltonianSet optimal_hamiltonians(const Ensemble& e, double rank_tol) {
  const auto gens = rate_generators(e, rank_tol);
  std::vector<Hamiltonian> hams;
  hams.reserve(gens.size());
  for (std::size_t x = 0; x < gens.size(); ++x) {
    const EigenDecomposition eig = eig_hermitian(gens[x]);
    const double scale = std::max({1.0, std::abs(eig.values.front()), std::abs(eig.values.back())});
    const double zero_tol = kDefaultRankTol * scale;
    hams.emplace_back(
        apply_spectral(eig, [zero_tol](double l) { return l < -zero_tol ? -1.0 : 1.0; }), true, x);
  }
  return HamiltonianSet(std::move(hams));
}

double max_mixing_rate(const Ensemble& e, double rank_tol) {
  const auto gens = rate_generators(e, rank_tol);
  double total = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) total += e.probability(x) * trace_norm(gens[x]);
  return total;
}

double binary_max_rate(const Ensemble& e, double rank_tol) {
  if (e.size() != 2) {
    throw Error(ErrorKind::NotBinary, "ensemble has " + std::to_string(e.size()) + " members");
  }
  const ComplexMatrix log_rho = checked_log_expected(e, rank_tol);
  return e.probability(0) * trace_norm(kI * commutator(e.state(0).matrix(), log_rho));
}

double bound_theorem_binary(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::DomainError, "p must lie in [0,1], got " + std::to_string(p));
  }
  return 4.0 * std::sqrt(p * (1.0 - p));
}

double bound_theorem_general(std::span<const double> probs) {
  shannon_entropy(probs);  // validates the distribution
  const std::size_t x0 = static_cast<std::size_t>(
      std::distance(probs.begin(), std::max_element(probs.begin(), probs.end())));
  double sum = 0.0;
  for (std::size_t x = 0; x < probs.size(); ++x) {
    if (x == x0) continue;
    for (std::size_t y = 0; y < probs.size(); ++y) {
      if (y != x) sum += std::sqrt(probs[x] * probs[y]);
    }
  }
  return 4.0 * sum;
}

std::vector<StmPoint> stm_check(const Ensemble& e, const HamiltonianSet& hams,
                                std::span<const double> ts) {
  const double lower = average_entropy(e);
  const double upper = lower + shannon_entropy(e.probabilities());
  std::vector<StmPoint> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const double s = expected_entropy_at(e, hams, t);
    out.push_back({t, s, lower, upper, s >= lower - kStmSlack && s <= upper + kStmSlack});
  }
  return out;
}

AkGap ak_gap(const ComplexMatrix& a, const ComplexMatrix& b, double rank_tol) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "ak_gap operands differ in size");
  for (const ComplexMatrix* m : {&a, &b}) {
    const auto ev = eigenvalues_hermitian(*m);
    if (ev.front() < -kHermitianTol * std::max(1.0, std::abs(ev.back()))) {
      throw Error(ErrorKind::DomainError, "ak_gap operand is not positive semidefinite");
    }
  }
  const ComplexMatrix sum = a + b;
  const EigenDecomposition eig = eig_hermitian(sum);
  if (eig.values.front() <= rank_tol * eig.values.back()) {
    throw Error(ErrorKind::DomainError, "A + B is rank-deficient");
  }
  const ComplexMatrix log_sum = support_log(eig, rank_tol);
  const double lhs = trace_norm(kI * commutator(b, log_sum));

  const auto xlogx = [](double v) { return v > 0.0 ? v * std::log(v) : 0.0; };
  const double alpha = a.trace().real();
  const double beta = b.trace().real();
  return {lhs, xlogx(alpha + beta) - xlogx(alpha) - xlogx(beta)};
}

RateReport rate_report(const Ensemble& e, const HamiltonianSet* hams, double rank_tol,
                       double fd_step) {
  RateReport r;
  const HamiltonianSet chosen = hams ? *hams : optimal_hamiltonians(e, rank_tol);
  r.mixing_rate_at_H = mixing_rate(e, chosen, rank_tol);
  r.max_rate = max_mixing_rate(e, rank_tol);
  if (e.size() == 2) r.binary_max_rate = binary_max_rate(e, rank_tol);
  r.bound_thm = bound_theorem_general(e.probabilities());
  r.bound_conjecture = shannon_entropy(e.probabilities());
  try {
    r.fd_residual = std::abs(r.mixing_rate_at_H - fd_mixing_rate(e, chosen, fd_step, rank_tol));
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::RankDeficient) throw;
  }
  if (r.bound_thm > 0.0) r.ratio_thm = r.max_rate / r.bound_thm;
  if (r.bound_conjecture > 0.0) r.ratio_conjecture = r.max_rate / r.bound_conjecture;
  return r;
}

nlohmann::json to_json(const RateReport& r) {
  const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"mixing_rate_at_H", r.mixing_rate_at_H},
          {"max_rate", r.max_rate},
          {"binary_max_rate", opt(r.binary_max_rate)},
          {"bound_thm", r.bound_thm},
          {"bound_conjecture", r.bound_conjecture},
          {"fd_residual", opt(r.fd_residual)},
          {"ratio_thm", opt(r.ratio_thm)},
          {"ratio_conjecture", opt(r.ratio_conjecture)}};
}

}  // namespace mixrate
