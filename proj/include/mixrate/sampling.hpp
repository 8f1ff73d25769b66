#pragma once

#include <cstddef>
#include <vector>

#include "mixrate/ensemble.hpp"
#include "mixrate/entangling.hpp"
#include "mixrate/rng.hpp"

namespace mixrate {

inline constexpr double kMinSampledProbability = 1e-6;

/// G G^dagger / Tr(G G^dagger) with G complex Ginibre (Hilbert-Schmidt measure).
DensityMatrix sample_density(std::size_t dim, Rng& rng);

/// (G + G^dagger)/2 rescaled to operator norm exactly 1; flagged normalized.
Hamiltonian sample_hamiltonian(std::size_t dim, Rng& rng);

HamiltonianSet sample_hamiltonian_set(std::size_t dim, std::size_t count, Rng& rng);

/// Flat Dirichlet via normalized exponentials; redrawn until every entry
/// exceeds kMinSampledProbability.
std::vector<double> sample_probabilities(std::size_t count, Rng& rng);

Ensemble sample_ensemble(std::size_t dim, std::size_t n_states, Rng& rng);

/// Haar-random unit vector on the given factors.
PureState sample_pure_state(FactorDims dims, Rng& rng);
/// sample_hamiltonian on A (x) B, wrapped with its factor dims.
BipartiteOperator sample_bipartite_operator(std::size_t dim_A, std::size_t dim_B, Rng& rng);

}  // namespace mixrate
