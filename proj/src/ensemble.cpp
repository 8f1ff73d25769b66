#include "mixrate/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixrate/error.hpp"
#include "mixrate/hermitian.hpp"

namespace mixrate {

DensityMatrix::DensityMatrix(const ComplexMatrix& m, std::optional<std::size_t> index) {
  if (m.dim() == 0) throw InvariantViolation(index, "dim", "empty matrix");
  if (!m.is_finite()) throw InvariantViolation(index, "finite", "non-finite entry");
  ComplexMatrix h;
  try {
    h = symmetrize_checked(m);
  } catch (const Error& e) {
    throw InvariantViolation(index, "hermitian", e.what());
  }
  const double lmin = eigenvalues_hermitian(h).front();
  if (lmin < -kStateTol) {
    throw InvariantViolation(index, "psd", "minimum eigenvalue " + std::to_string(lmin));
  }
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > kStateTol) {
    throw InvariantViolation(index, "trace", "trace " + std::to_string(tr));
  }
  h *= 1.0 / tr;
  matrix_ = std::move(h);
}

double operator_norm(const ComplexMatrix& m) {
  const auto ev = eigenvalues_hermitian(m);
  if (ev.empty()) return 0.0;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

Hamiltonian::Hamiltonian(const ComplexMatrix& m, bool normalized,
                         std::optional<std::size_t> index)
    : normalized_(normalized) {
  if (m.dim() == 0) throw InvariantViolation(index, "dim", "empty matrix");
  if (!m.is_finite()) throw InvariantViolation(index, "finite", "non-finite entry");
  try {
    matrix_ = symmetrize_checked(m);
  } catch (const Error& e) {
    throw InvariantViolation(index, "hermitian", e.what());
  }
  if (normalized_) {
    const double norm = operator_norm(matrix_);
    if (norm > 1.0 + kStateTol) {
      throw InvariantViolation(index, "norm", "operator norm " + std::to_string(norm));
    }
  }
}

Ensemble::Ensemble(std::vector<double> probabilities, std::vector<DensityMatrix> states) {
  if (probabilities.size() != states.size()) {
    throw InvariantViolation(std::nullopt, "length",
                             std::to_string(probabilities.size()) + " probabilities for " +
                                 std::to_string(states.size()) + " states");
  }
  if (states.empty()) throw InvariantViolation(std::nullopt, "empty", "no members");
  const std::size_t d = states.front().dim();
  double total = 0.0;
  for (std::size_t x = 0; x < states.size(); ++x) {
    const double p = probabilities[x];
    if (!std::isfinite(p) || p < 0.0) {
      throw InvariantViolation(x, "probability_negative", std::to_string(p));
    }
    if (states[x].dim() != d) {
      throw InvariantViolation(x, "dim", "dimension " + std::to_string(states[x].dim()) +
                                             ", expected " + std::to_string(d));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kStateTol) {
    throw InvariantViolation(std::nullopt, "probability_sum", "sum " + std::to_string(total));
  }
  for (std::size_t x = 0; x < states.size(); ++x) {
    if (probabilities[x] == 0.0) continue;
    probs_.push_back(probabilities[x]);
    states_.push_back(std::move(states[x]));
    kept_.push_back(x);
  }
}

HamiltonianSet::HamiltonianSet(std::vector<Hamiltonian> hams) : hams_(std::move(hams)) {
  for (const auto& h : hams_) {
    if (h.dim() != hams_.front().dim()) {
      throw Error(ErrorKind::DimMismatch, "Hamiltonians of differing dimension");
    }
  }
}

HamiltonianSet HamiltonianSet::select(std::span<const std::size_t> indices) const {
  std::vector<Hamiltonian> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(hams_.at(i));
  return HamiltonianSet(std::move(out));
}

void require_compatible(const Ensemble& e, const HamiltonianSet& hams) {
  if (hams.size() != e.size()) {
    throw Error(ErrorKind::DimMismatch, std::to_string(hams.size()) + " Hamiltonians for " +
                                            std::to_string(e.size()) + " members");
  }
  if (hams.dim() != e.dim()) {
    throw Error(ErrorKind::DimMismatch, "Hamiltonian dim " + std::to_string(hams.dim()) +
                                            " vs state dim " + std::to_string(e.dim()));
  }
}

DensityMatrix expected_state(const Ensemble& e) {
  ComplexMatrix rho(e.dim());
  for (std::size_t x = 0; x < e.size(); ++x) rho += e.state(x).matrix() * e.probability(x);
  return DensityMatrix(rho);
}

double entropy_of_spectrum(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues)
    if (l > 0.0) s -= l * std::log(l);
  return s;
}

double von_neumann_entropy(const ComplexMatrix& psd_unit_trace) {
  const auto ev = eigenvalues_hermitian(psd_unit_trace);
  return entropy_of_spectrum(ev);
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

double shannon_entropy(std::span<const double> probs) {
  if (probs.empty()) throw Error(ErrorKind::BadDistribution, "empty distribution");
  double total = 0.0;
  for (double p : probs) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::BadDistribution, "non-positive probability " + std::to_string(p));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kStateTol) {
    throw Error(ErrorKind::BadDistribution, "probabilities sum to " + std::to_string(total));
  }
  double s = 0.0;
  for (double p : probs) s -= p * std::log(p);
  return s;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::DomainError, "binary_entropy needs p in [0,1], got " + std::to_string(p));
  }
  if (p == 0.0 || p == 1.0) return 0.0;
  const double q = 1.0 - p;
  double s = 0.0;
  s -= p * std::log(p);
  s -= q * std::log(q);
  return s;
}

double average_entropy(const Ensemble& e) {
  double s = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) s += e.probability(x) * von_neumann_entropy(e.state(x));
  return s;
}

ComplexMatrix unitary_propagator(const Hamiltonian& h, double t) {
  return matrix_fn(h.matrix(), [t](double l) { return std::polar(1.0, -l * t); });
}

Ensemble evolve(const Ensemble& e, const HamiltonianSet& hams, double t) {
  require_compatible(e, hams);
  std::vector<DensityMatrix> states;
  states.reserve(e.size());
  for (std::size_t x = 0; x < e.size(); ++x) {
    const ComplexMatrix u = unitary_propagator(hams[x], t);
    states.emplace_back(u * e.state(x).matrix() * u.adjoint(), x);
  }
  return Ensemble(std::vector<double>(e.probabilities().begin(), e.probabilities().end()),
                  std::move(states));
}

}  // namespace mixrate
