#include "mixrate/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "mixrate/error.hpp"

namespace mixrate {

namespace {
ComplexMatrix ginibre(std::size_t dim, Rng& rng) {
  ComplexMatrix g(dim);
  for (auto& z : g.data()) z = rng.complex_gaussian();
  return g;
}
}  // namespace

DensityMatrix sample_density(std::size_t dim, Rng& rng) {
  if (dim == 0) throw Error(ErrorKind::DomainError, "dim must be >= 1");
  const ComplexMatrix g = ginibre(dim, rng);
  ComplexMatrix w = g * g.adjoint();
  w *= 1.0 / w.trace().real();
  return DensityMatrix(w);
}

Hamiltonian sample_hamiltonian(std::size_t dim, Rng& rng) {
  if (dim == 0) throw Error(ErrorKind::DomainError, "dim must be >= 1");
  const ComplexMatrix g = ginibre(dim, rng);
  ComplexMatrix h(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    h(i, i) = g(i, i).real();
    for (std::size_t j = i + 1; j < dim; ++j) {
      h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
      h(j, i) = std::conj(h(i, j));
    }
  }
  h *= 1.0 / operator_norm(h);
  return Hamiltonian(h, true);
}

HamiltonianSet sample_hamiltonian_set(std::size_t dim, std::size_t count, Rng& rng) {
  std::vector<Hamiltonian> hams;
  hams.reserve(count);
  for (std::size_t x = 0; x < count; ++x) hams.push_back(sample_hamiltonian(dim, rng));
  return HamiltonianSet(std::move(hams));
}

std::vector<double> sample_probabilities(std::size_t count, Rng& rng) {
  if (count == 0) throw Error(ErrorKind::DomainError, "need at least one probability");
  std::vector<double> p(count);
  for (;;) {
    double total = 0.0;
    for (auto& v : p) {
      v = -std::log(rng.uniform_positive());
      total += v;
    }
    for (auto& v : p) v /= total;
    if (std::all_of(p.begin(), p.end(), [](double v) { return v > kMinSampledProbability; })) {
      return p;
    }
  }
}

Ensemble sample_ensemble(std::size_t dim, std::size_t n_states, Rng& rng) {
  std::vector<double> probs = sample_probabilities(n_states, rng);
  std::vector<DensityMatrix> states;
  states.reserve(n_states);
  for (std::size_t x = 0; x < n_states; ++x) states.push_back(sample_density(dim, rng));
  return Ensemble(std::move(probs), std::move(states));
}

PureState sample_pure_state(FactorDims dims, Rng& rng) {
  std::vector<Complex> amps(dims.total());
  double norm2 = 0.0;
  for (auto& z : amps) {
    z = rng.complex_gaussian();
    norm2 += std::norm(z);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& z : amps) z *= scale;
  return PureState(dims, std::move(amps));
}

BipartiteOperator sample_bipartite_operator(std::size_t dim_A, std::size_t dim_B, Rng& rng) {
  return BipartiteOperator(sample_hamiltonian(dim_A * dim_B, rng).matrix(), dim_A, dim_B, true);
}

}  // namespace mixrate
