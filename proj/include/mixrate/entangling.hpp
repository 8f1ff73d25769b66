#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixrate/complex_matrix.hpp"
#include "mixrate/ensemble.hpp"
#include "mixrate/hermitian.hpp"

namespace mixrate {

/// Factor dimensions of a (x) A (x) B (x) b. Indices compose row-major in
/// this order everywhere: the ancilla a is the slowest factor, b the fastest.
struct FactorDims {
  std::size_t a = 1, A = 1, B = 1, b = 1;

  std::size_t total() const noexcept { return a * A * B * b; }
  std::array<std::size_t, 4> as_array() const noexcept { return {a, A, B, b}; }
};

/// Unit vector on a (x) A (x) B (x) b.
class PureState {
 public:
  /// Throws InvariantViolation ("dims", "length", "norm").
  PureState(FactorDims dims, std::vector<Complex> amplitudes);

  const FactorDims& dims() const noexcept { return dims_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }

 private:
  FactorDims dims_;
  std::vector<Complex> amps_;
};

/// H_AB on A (x) B.
class BipartiteOperator {
 public:
  BipartiteOperator(const ComplexMatrix& m, std::size_t dim_A, std::size_t dim_B,
                    bool normalized = false);

  const Hamiltonian& hamiltonian() const noexcept { return ham_; }
  const ComplexMatrix& matrix() const noexcept { return ham_.matrix(); }
  std::size_t dim_A() const noexcept { return dim_A_; }
  std::size_t dim_B() const noexcept { return dim_B_; }

 private:
  Hamiltonian ham_;
  std::size_t dim_A_, dim_B_;
};

/// Reduced operator on the factors listed in `keep` (strictly increasing
/// factor positions). Throws DimMismatch, BadSubset.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

ComplexMatrix reduced_aA(const PureState& psi);   // Tr_{Bb} |psi><psi|
ComplexMatrix reduced_Bb(const PureState& psi);   // Tr_{aA} |psi><psi|
ComplexMatrix reduced_aAB(const PureState& psi);  // Tr_b |psi><psi|

/// S(rho_aA).
double entanglement_entropy(const PureState& psi);

/// (I_a (x) e^{-iHt} (x) I_b) psi
PureState evolve_pure(const PureState& psi, const BipartiteOperator& h, double t);

enum class EntanglingForm {
  LogTimesIdentity,     // ln(rho_aA) (x) I_B
  LogOfMixedExtension,  // ln(rho_aA (x) I_B / d_B)
};

/// dE/dt at t = 0, evaluated as i Tr((I_a (x) H)[rho_aAB, L]) with L built
/// per `form`. Throws DimMismatch.
double entangling_rate(const PureState& psi, const BipartiteOperator& h,
                       EntanglingForm form = EntanglingForm::LogTimesIdentity,
                       double rank_tol = kDefaultRankTol);

/// Central difference of entanglement_entropy along the evolution. Throws
/// IllConditioned when rho_aA has a nonzero eigenvalue below 1e3 * rank_tol.
double fd_entangling_rate(const PureState& psi, const BipartiteOperator& h, double step,
                          double rank_tol = kDefaultRankTol);

/// mu = [rho_aA (x) I_B/d_B - d_B^{-2} rho_aAB] / (1 - d_B^{-2}), the state
/// completing rho_aA (x) I_B/d_B = (1 - d_B^{-2}) mu + d_B^{-2} rho_aAB.
/// Throws Degenerate (d_B = 1), DimOrder (d_B > d_A), PositivityViolation.
DensityMatrix bravyi_mu(const PureState& psi);

struct SieReduction {
  Ensemble ensemble;     // {(1 - d_B^{-2}, mu), (d_B^{-2}, rho_aAB)}
  Hamiltonian lifted;    // I_a (x) H_AB, acting on the second member
  double mixing_rate;    // Lambda(E_2, H)
  double entangling_rate;
  double identity_residual;  // |Lambda - d_B^{-2} Gamma|
};

SieReduction sie_to_sim(const PureState& psi, const BipartiteOperator& h,
                        double rank_tol = kDefaultRankTol);

struct StePoint {
  double t;
  double entropy;
  double bound;  // E(0) + 2 ln min(d_A, d_B)
  bool ok;
};

inline constexpr double kSteSlack = 1e-9;

std::vector<StePoint> ste_check(const PureState& psi, const BipartiteOperator& h,
                                std::span<const double> ts);

// {"dims": [da, dA, dB, db], "amplitudes": [[re, im], ...]}
PureState parse_pure_state(std::string_view text);
std::string serialize_pure_state(const PureState& psi);

// {"dim": dA*dB, "dims": [dA, dB], "hamiltonians": [H]}
BipartiteOperator parse_bipartite_operator(std::string_view text, bool normalized = false);
std::string serialize_bipartite_operator(const BipartiteOperator& h);

}  // namespace mixrate
