#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mixrate/complex_matrix.hpp"

namespace mixrate {

inline constexpr double kStateTol = 1e-10;

/// Hermitian, PSD (min eigenvalue >= -1e-10), unit trace (within 1e-10,
/// then renormalized exactly). Immutable once built.
class DensityMatrix {
 public:
  /// Throws InvariantViolation naming the failed check ("finite",
  /// "hermitian", "psd", "trace"); `index` is attached to the error.
  explicit DensityMatrix(const ComplexMatrix& m, std::optional<std::size_t> index = {});

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }

 private:
  ComplexMatrix matrix_;
};

/// Self-adjoint generator. When `normalized` is set the operator norm is
/// checked to be at most 1 + 1e-10.
class Hamiltonian {
 public:
  explicit Hamiltonian(const ComplexMatrix& m, bool normalized = false,
                       std::optional<std::size_t> index = {});

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }
  bool normalized() const noexcept { return normalized_; }

 private:
  ComplexMatrix matrix_;
  bool normalized_;
};

/// max |lambda| of a Hermitian matrix.
double operator_norm(const ComplexMatrix& m);

/// Finite ensemble {p_x, rho_x}. Members with p_x == 0 are dropped on
/// construction; kept_indices() maps surviving members back to the input.
class Ensemble {
 public:
  /// Throws InvariantViolation: "length", "probability_negative",
  /// "probability_sum", "dim", "empty".
  Ensemble(std::vector<double> probabilities, std::vector<DensityMatrix> states);

  std::size_t size() const noexcept { return probs_.size(); }
  std::size_t dim() const noexcept { return states_.front().dim(); }
  std::span<const double> probabilities() const noexcept { return probs_; }
  const std::vector<DensityMatrix>& states() const noexcept { return states_; }
  double probability(std::size_t x) const { return probs_.at(x); }
  const DensityMatrix& state(std::size_t x) const { return states_.at(x); }
  std::span<const std::size_t> kept_indices() const noexcept { return kept_; }

 private:
  std::vector<double> probs_;
  std::vector<DensityMatrix> states_;
  std::vector<std::size_t> kept_;
};

/// One Hamiltonian per ensemble member, all of one dimension.
class HamiltonianSet {
 public:
  HamiltonianSet() = default;
  explicit HamiltonianSet(std::vector<Hamiltonian> hams);

  std::size_t size() const noexcept { return hams_.size(); }
  std::size_t dim() const noexcept { return hams_.empty() ? 0 : hams_.front().dim(); }
  const Hamiltonian& operator[](std::size_t x) const { return hams_.at(x); }
  auto begin() const noexcept { return hams_.begin(); }
  auto end() const noexcept { return hams_.end(); }

  /// Picks the entries for the members an Ensemble kept.
  HamiltonianSet select(std::span<const std::size_t> indices) const;

 private:
  std::vector<Hamiltonian> hams_;
};

/// Throws DimMismatch unless hams matches the ensemble in length and dim.
void require_compatible(const Ensemble& e, const HamiltonianSet& hams);

DensityMatrix expected_state(const Ensemble& e);

/// -sum lambda ln lambda over the spectrum, with 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const ComplexMatrix& psd_unit_trace);
/// Same, from a spectrum (non-positive entries contribute 0).
double entropy_of_spectrum(std::span<const double> eigenvalues);

/// -sum p ln p in nats. Throws BadDistribution unless all p > 0 and the
/// sum is 1 within 1e-10.
double shannon_entropy(std::span<const double> probs);

/// -p ln p - (1-p) ln(1-p), S(0) = S(1) = 0. DomainError outside [0, 1].
double binary_entropy(double p);

double average_entropy(const Ensemble& e);

/// e^{-iHt}, computed through the spectrum of H.
ComplexMatrix unitary_propagator(const Hamiltonian& h, double t);

/// Each member conjugated by its own propagator; probabilities unchanged.
Ensemble evolve(const Ensemble& e, const HamiltonianSet& hams, double t);

}  // namespace mixrate
