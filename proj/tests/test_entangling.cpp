#include <doctest.h>

#include <cmath>

#include "mixrate/entangling.hpp"
#include "mixrate/error.hpp"
#include "mixrate/rates.hpp"
#include "test_support.hpp"

using namespace mixrate;
using mixrate::test::I;

namespace {

const FactorDims kQubitPair{1, 2, 2, 1};

PureState bell() {
  const double r = 1.0 / std::sqrt(2.0);
  return PureState(kQubitPair, {r, 0.0, 0.0, r});
}

PureState product00(FactorDims dims = kQubitPair) {
  std::vector<Complex> amps(dims.total(), 0.0);
  amps[0] = 1.0;
  return PureState(dims, std::move(amps));
}

// |01><10| + |10><01|
BipartiteOperator swap_type() {
  ComplexMatrix h = ComplexMatrix::zero(4);
  h(1, 2) = 1.0;
  h(2, 1) = 1.0;
  return BipartiteOperator(h, 2, 2, true);
}

BipartiteOperator identity_op(std::size_t dA, std::size_t dB) {
  return BipartiteOperator(ComplexMatrix::identity(dA * dB), dA, dB, true);
}

PureState random_state(Rng& rng, FactorDims dims) { return sample_pure_state(dims, rng); }

}  // namespace

TEST_CASE("PureState validation") {
  CHECK_NOTHROW(bell());
  try {
    PureState(kQubitPair, {1.0, 0.0, 0.0});
    FAIL("expected rejection");
  } catch (const InvariantViolation& e) {
    CHECK(e.which() == "length");
  }
  try {
    PureState(kQubitPair, {1.0, 1.0, 0.0, 0.0});
    FAIL("expected rejection");
  } catch (const InvariantViolation& e) {
    CHECK(e.which() == "norm");
  }
  try {
    PureState(FactorDims{0, 2, 2, 1}, {});
    FAIL("expected rejection");
  } catch (const InvariantViolation& e) {
    CHECK(e.which() == "dims");
  }
}

TEST_CASE("BipartiteOperator validation") {
  CHECK(test::error_kind([] { BipartiteOperator(ComplexMatrix::identity(4), 2, 3); }) ==
        ErrorKind::DimMismatch);
  CHECK(test::error_kind([] { BipartiteOperator(ComplexMatrix::identity(4) * Complex(2.0), 2, 2, true); }) ==
        ErrorKind::InvariantViolation);
}

TEST_CASE("partial_trace examples") {
  Rng rng(201, 0);
  const ComplexMatrix ra = sample_density(2, rng).matrix();
  const ComplexMatrix rb = sample_density(3, rng).matrix();
  const std::size_t dims[] = {2, 3};
  const std::size_t keep_a[] = {0};
  const std::size_t keep_b[] = {1};
  CHECK(max_abs_diff(partial_trace(kron(ra, rb), dims, keep_a), ra) <= 1e-15);
  CHECK(max_abs_diff(partial_trace(kron(ra, rb), dims, keep_b), rb) <= 1e-15);

  const PureState phi = bell();
  const std::size_t qd[] = {2, 2};
  const ComplexMatrix proj = ComplexMatrix::outer(phi.amplitudes());
  CHECK(max_abs_diff(partial_trace(proj, qd, keep_a), ComplexMatrix::diagonal({0.5, 0.5})) <= 1e-15);

  const std::size_t keep_all[] = {0, 1};
  CHECK(max_abs_diff(partial_trace(kron(ra, rb), dims, keep_all), kron(ra, rb)) == 0.0);

  const std::size_t bad_dims[] = {2, 2};
  CHECK(test::error_kind([&] { partial_trace(kron(ra, rb), bad_dims, keep_a); }) ==
        ErrorKind::DimMismatch);
  const std::size_t unordered[] = {1, 0};
  CHECK(test::error_kind([&] { partial_trace(kron(ra, rb), dims, unordered); }) == ErrorKind::BadSubset);
  const std::size_t out_of_range[] = {2};
  CHECK(test::error_kind([&] { partial_trace(kron(ra, rb), dims, out_of_range); }) ==
        ErrorKind::BadSubset);
}

TEST_CASE("partial_trace preserves trace and positivity on three factors") {
  Rng rng(203, 0);
  const std::size_t dims[] = {2, 3, 2};
  const ComplexMatrix m = sample_density(12, rng).matrix();
  const std::size_t keeps[][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& keep : keeps) {
    const ComplexMatrix r = partial_trace(m, dims, keep);
    CHECK(std::abs(r.trace().real() - 1.0) <= 1e-14);
    CHECK(eigenvalues_hermitian(r).front() >= -1e-14);
  }
  // tracing in two stages equals tracing at once
  const std::size_t keep01[] = {0, 1};
  const std::size_t keep0[] = {0};
  const std::size_t dims01[] = {2, 3};
  CHECK(max_abs_diff(partial_trace(partial_trace(m, dims, keep01), dims01, keep0),
                     partial_trace(m, dims, keep0)) <= 1e-15);
}

TEST_CASE("entanglement_entropy examples") {
  CHECK(entanglement_entropy(product00()) <= 1e-15);
  CHECK(entanglement_entropy(bell()) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  for (std::size_t d : {2u, 3u, 4u}) {
    std::vector<Complex> amps(d * d, 0.0);
    for (std::size_t k = 0; k < d; ++k) amps[k * d + k] = 1.0 / std::sqrt(double(d));
    CHECK(entanglement_entropy(PureState({1, d, d, 1}, amps)) ==
          doctest::Approx(std::log(double(d))).epsilon(1e-13));
  }
}

TEST_CASE("purity symmetry of the two halves") {
  Rng rng(205, 0);
  for (int k = 0; k < 100; ++k) {
    const FactorDims dims{1 + rng.below(2), 1 + rng.below(4), 1 + rng.below(4), 1 + rng.below(2)};
    const PureState psi = random_state(rng, dims);
    CHECK(std::abs(von_neumann_entropy(reduced_aA(psi)) - von_neumann_entropy(reduced_Bb(psi))) <= 1e-9);
    CHECK(std::abs(reduced_aAB(psi).trace().real() - 1.0) <= 1e-12);
  }
}

TEST_CASE("evolve_pure keeps the norm and is trivial under the identity on entropy") {
  Rng rng(207, 0);
  const PureState psi = random_state(rng, {2, 2, 3, 2});
  const PureState moved = evolve_pure(psi, identity_op(2, 3), 0.8);
  CHECK(std::abs(entanglement_entropy(moved) - entanglement_entropy(psi)) <= 1e-12);
  const PureState other = evolve_pure(psi, sample_bipartite_operator(2, 3, rng), 1.1);
  double n2 = 0.0;
  for (const auto& z : other.amplitudes()) n2 += std::norm(z);
  CHECK(n2 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("entangling_rate examples") {
  Rng rng(209, 0);
  const PureState psi = random_state(rng, {2, 2, 2, 2});
  CHECK(std::abs(entangling_rate(psi, identity_op(2, 2))) <= 1e-12);
  CHECK(std::abs(entangling_rate(product00(), sample_bipartite_operator(2, 2, rng))) <= 1e-12);

  // maximal entanglement is stationary
  CHECK(std::abs(entangling_rate(bell(), swap_type())) <= 1e-12);

  // sqrt(0.8)|01> + i sqrt(0.2)|10>: the Schmidt weight of |01> grows at 2 sqrt(0.8 * 0.2),
  // so dE/dt = -0.8 ln(0.8 / 0.2).
  const PureState tilted(kQubitPair, {0.0, std::sqrt(0.8), I * std::sqrt(0.2), 0.0});
  const double closed_form = -0.8 * std::log(4.0);
  CHECK(entangling_rate(tilted, swap_type()) == doctest::Approx(closed_form).epsilon(1e-12));
  CHECK(fd_entangling_rate(tilted, swap_type(), 1e-4) == doctest::Approx(closed_form).epsilon(1e-7));

  CHECK(test::error_kind([&] { entangling_rate(psi, sample_bipartite_operator(3, 2, rng)); }) ==
        ErrorKind::DimMismatch);
}

TEST_CASE("entangling_rate matches finite differences on full-Schmidt-rank states") {
  Rng rng(211, 0);
  for (int k = 0; k < 60; ++k) {
    const std::size_t dA = 1 + rng.below(4), dB = 1 + rng.below(4);
    const FactorDims dims{1 + rng.below(2), dA, dB, 1 + rng.below(2)};
    const PureState psi = random_state(rng, dims);
    const BipartiteOperator h = sample_bipartite_operator(dA, dB, rng);
    const double a = entangling_rate(psi, h);
    const double fd = fd_entangling_rate(psi, h, 1e-4);
    CHECK(std::abs(a - fd) <= 1e-6 * std::max(1.0, std::abs(a)));
    CHECK(std::abs(entangling_rate(psi, h, EntanglingForm::LogOfMixedExtension) - a) <= 1e-9);
  }
}

TEST_CASE("fd_entangling_rate examples") {
  Rng rng(213, 0);
  const PureState psi = random_state(rng, {1, 3, 3, 1});
  CHECK(std::abs(fd_entangling_rate(psi, identity_op(3, 3), 1e-4)) <= 1e-8);

  const BipartiteOperator h = sample_bipartite_operator(3, 3, rng);
  const double a = entangling_rate(psi, h);
  const double e1 = std::abs(fd_entangling_rate(psi, h, 0.04) - a);
  const double e2 = std::abs(fd_entangling_rate(psi, h, 0.02) - a);
  REQUIRE(e1 > 1e-9);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));

  // a Schmidt weight of 1e-10 sits in the unreliable band
  const double eps = 1e-10;
  const PureState thin(kQubitPair, {std::sqrt(1.0 - eps), 0.0, 0.0, std::sqrt(eps)});
  CHECK(test::error_kind([&] { fd_entangling_rate(thin, swap_type(), 1e-4); }) ==
        ErrorKind::IllConditioned);
}

TEST_CASE("bravyi_mu examples") {
  const PureState phi = bell();
  const ComplexMatrix want =
      (ComplexMatrix::identity(4) - ComplexMatrix::outer(phi.amplitudes())) * Complex(1.0 / 3.0);
  CHECK(max_abs_diff(bravyi_mu(phi).matrix(), want) <= 1e-15);

  CHECK(max_abs_diff(bravyi_mu(product00()).matrix(),
                     ComplexMatrix::diagonal({1.0 / 3.0, 2.0 / 3.0, 0.0, 0.0})) <= 1e-15);

  Rng rng(215, 0);
  const PureState psi = random_state(rng, {2, 3, 2, 2});
  const ComplexMatrix mu = bravyi_mu(psi).matrix();
  const double w = 0.25;
  const ComplexMatrix lhs = kron(reduced_aA(psi), ComplexMatrix::identity(2)) * Complex(0.5);
  const ComplexMatrix rhs = mu * Complex(1.0 - w) + reduced_aAB(psi) * Complex(w);
  CHECK(max_abs_diff(lhs, rhs) <= 1e-10);

  CHECK(test::error_kind([] { bravyi_mu(product00({1, 2, 1, 1})); }) == ErrorKind::Degenerate);
  CHECK(test::error_kind([] { bravyi_mu(product00({1, 2, 3, 1})); }) == ErrorKind::DimOrder);
}

TEST_CASE("bravyi_mu is a valid state for random inputs") {
  Rng rng(217, 0);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t dB = 2 + rng.below(2);
    const std::size_t dA = dB + rng.below(2);
    const PureState psi = random_state(rng, {1 + rng.below(2), dA, dB, 1 + rng.below(2)});
    CHECK_NOTHROW(bravyi_mu(psi));
  }
}

TEST_CASE("sie_to_sim examples") {
  Rng rng(219, 0);
  const SieReduction still = sie_to_sim(random_state(rng, {2, 2, 2, 2}), identity_op(2, 2));
  CHECK(std::abs(still.mixing_rate) <= 1e-10);
  CHECK(std::abs(still.entangling_rate) <= 1e-10);
  CHECK(still.identity_residual <= 1e-10);

  const SieReduction bs = sie_to_sim(bell(), swap_type());
  CHECK(bs.identity_residual <= 1e-8);
  CHECK(bs.ensemble.size() == 2);
  CHECK(bs.ensemble.probability(1) == 0.25);

  const PureState tilted(kQubitPair, {0.0, std::sqrt(0.8), I * std::sqrt(0.2), 0.0});
  const SieReduction tr = sie_to_sim(tilted, swap_type());
  CHECK(tr.identity_residual <= 1e-8);
  CHECK(tr.mixing_rate == doctest::Approx(-0.2 * std::log(4.0)).epsilon(1e-10));

  for (int k = 0; k < 100; ++k) {
    const SieReduction r =
        sie_to_sim(random_state(rng, {2, 2, 2, 2}), sample_bipartite_operator(2, 2, rng));
    CHECK(r.identity_residual <= 1e-8);
    // the independent side: the lifted Hamiltonian drives the second member only
    const HamiltonianSet hams({Hamiltonian(ComplexMatrix::zero(r.lifted.dim())), r.lifted});
    CHECK(std::abs(fd_mixing_rate(r.ensemble, hams, 1e-4) - r.mixing_rate) <= 1e-6);
  }
}

TEST_CASE("ste_check examples") {
  Rng rng(221, 0);
  std::vector<double> grid;
  for (int k = 0; k <= 50; ++k) grid.push_back(0.1 * k);

  const PureState psi = random_state(rng, {2, 3, 2, 2});
  for (const auto& pt : ste_check(psi, identity_op(3, 2), grid)) {
    CHECK(pt.ok);
    CHECK(pt.entropy == doctest::Approx(entanglement_entropy(psi)).epsilon(1e-10));
  }

  for (const auto& pt : ste_check(product00({1, 3, 3, 1}), sample_bipartite_operator(3, 3, rng), grid)) {
    CHECK(pt.ok);
    CHECK(pt.entropy <= 2.0 * std::log(3.0) + 1e-9);
    CHECK(pt.bound == doctest::Approx(2.0 * std::log(3.0)));
  }

  for (int k = 0; k < 20; ++k) {
    const std::size_t dA = 1 + rng.below(3), dB = 1 + rng.below(3);
    const PureState s = random_state(rng, {1 + rng.below(2), dA, dB, 1 + rng.below(2)});
    for (const auto& pt : ste_check(s, sample_bipartite_operator(dA, dB, rng), grid)) CHECK(pt.ok);
  }
}

TEST_CASE("pure state and operator JSON round trip") {
  Rng rng(223, 0);
  const PureState psi = random_state(rng, {1, 2, 3, 2});
  const PureState back = parse_pure_state(serialize_pure_state(psi));
  CHECK(back.dims().as_array() == psi.dims().as_array());
  for (std::size_t k = 0; k < psi.amplitudes().size(); ++k) {
    CHECK(std::abs(back.amplitudes()[k] - psi.amplitudes()[k]) <= 1e-15);
  }

  const BipartiteOperator h = sample_bipartite_operator(2, 3, rng);
  const BipartiteOperator hb = parse_bipartite_operator(serialize_bipartite_operator(h), true);
  CHECK(hb.dim_A() == 2);
  CHECK(hb.dim_B() == 3);
  CHECK(max_abs_diff(hb.matrix(), h.matrix()) <= 1e-15);

  CHECK(test::error_kind([] { parse_pure_state(R"({"dims": [1, 2, 2], "amplitudes": []})"); }) ==
        ErrorKind::ParseError);
  CHECK(test::error_kind([] {
          parse_bipartite_operator(R"({"dim": 4, "dims": [2, 3], "hamiltonians": [[[[1,0]]]]})");
        }) != std::nullopt);
}
