#include "mixrate/entangling.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "mixrate/ensemble_io.hpp"
#include "mixrate/error.hpp"
#include "mixrate/rates.hpp"

namespace mixrate {

namespace {

const Complex kI{0.0, 1.0};

// rows x cols view of psi with rho = M M^dagger on the row factors.
ComplexMatrix gram_of_rows(std::span<const Complex> psi, std::size_t rows, std::size_t cols) {
  ComplexMatrix out(rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = i; j < rows; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < cols; ++k) s += psi[i * cols + k] * std::conj(psi[j * cols + k]);
      out(i, j) = s;
      out(j, i) = std::conj(s);
    }
  return out;
}

}  // namespace

PureState::PureState(FactorDims dims, std::vector<Complex> amplitudes)
    : dims_(dims), amps_(std::move(amplitudes)) {
  for (std::size_t d : dims_.as_array()) {
    if (d < 1) throw InvariantViolation(std::nullopt, "dims", "factor dimension must be >= 1");
  }
  if (amps_.size() != dims_.total()) {
    throw InvariantViolation(std::nullopt, "length",
                             std::to_string(amps_.size()) + " amplitudes for total dimension " +
                                 std::to_string(dims_.total()));
  }
  double norm2 = 0.0;
  for (const auto& z : amps_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvariantViolation(std::nullopt, "finite", "non-finite amplitude");
    }
    norm2 += std::norm(z);
  }
  if (std::abs(std::sqrt(norm2) - 1.0) > kStateTol) {
    throw InvariantViolation(std::nullopt, "norm", "norm " + std::to_string(std::sqrt(norm2)));
  }
}

BipartiteOperator::BipartiteOperator(const ComplexMatrix& m, std::size_t dim_A,
                                     std::size_t dim_B, bool normalized)
    : ham_(m, normalized), dim_A_(dim_A), dim_B_(dim_B) {
  if (dim_A * dim_B != m.dim() || dim_A == 0 || dim_B == 0) {
    throw Error(ErrorKind::DimMismatch, "operator of dim " + std::to_string(m.dim()) +
                                            " on factors " + std::to_string(dim_A) + "x" +
                                            std::to_string(dim_B));
  }
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw Error(ErrorKind::DimMismatch, "zero factor dimension");
    total *= d;
  }
  if (total != m.dim()) {
    throw Error(ErrorKind::DimMismatch, "factor dims multiply to " + std::to_string(total) +
                                            ", matrix dim " + std::to_string(m.dim()));
  }
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= dims.size() || (k > 0 && keep[k] <= keep[k - 1])) {
      throw Error(ErrorKind::BadSubset, "keep must be strictly increasing factor positions");
    }
  }
  const std::size_t nf = dims.size();
  std::vector<bool> kept(nf, false);
  for (std::size_t k : keep) kept[k] = true;

  // Per full index: its kept-subsystem index and traced-subsystem index.
  std::vector<std::size_t> keep_idx(total), trace_idx(total);
  std::size_t keep_dim = 1;
  for (std::size_t k : keep) keep_dim *= dims[k];
  for (std::size_t r = 0; r < total; ++r) {
    std::size_t rem = r, kstride = 1, tstride = 1, ki = 0, ti = 0;
    for (std::size_t f = nf; f-- > 0;) {
      const std::size_t digit = rem % dims[f];
      rem /= dims[f];
      if (kept[f]) {
        ki += digit * kstride;
        kstride *= dims[f];
      } else {
        ti += digit * tstride;
        tstride *= dims[f];
      }
    }
    keep_idx[r] = ki;
    trace_idx[r] = ti;
  }
  ComplexMatrix out(keep_dim);
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < total; ++c)
      if (trace_idx[r] == trace_idx[c]) out(keep_idx[r], keep_idx[c]) += m(r, c);
  return out;
}

ComplexMatrix reduced_aA(const PureState& psi) {
  const auto& d = psi.dims();
  return gram_of_rows(psi.amplitudes(), d.a * d.A, d.B * d.b);
}

ComplexMatrix reduced_aAB(const PureState& psi) {
  const auto& d = psi.dims();
  return gram_of_rows(psi.amplitudes(), d.a * d.A * d.B, d.b);
}

ComplexMatrix reduced_Bb(const PureState& psi) {
  const auto& d = psi.dims();
  const std::size_t rows = d.a * d.A, cols = d.B * d.b;
  // Transpose so the Bob factors become rows: rho_Bb = (M^T)(M^T)^dagger.
  std::vector<Complex> transposed(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) transposed[j * rows + i] = psi.amplitudes()[i * cols + j];
  return gram_of_rows(transposed, cols, rows);
}

double entanglement_entropy(const PureState& psi) { return von_neumann_entropy(reduced_aA(psi)); }

PureState evolve_pure(const PureState& psi, const BipartiteOperator& h, double t) {
  const auto& d = psi.dims();
  if (h.dim_A() != d.A || h.dim_B() != d.B) {
    throw Error(ErrorKind::DimMismatch, "H_AB factors do not match the state");
  }
  const ComplexMatrix u = unitary_propagator(h.hamiltonian(), t);
  const std::size_t n = d.A * d.B;
  std::vector<Complex> out(psi.amplitudes().size());
  for (std::size_t a = 0; a < d.a; ++a)
    for (std::size_t b = 0; b < d.b; ++b)
      for (std::size_t i = 0; i < n; ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += u(i, j) * psi.amplitudes()[(a * n + j) * d.b + b];
        out[(a * n + i) * d.b + b] = s;
      }
  // Re-normalize away roundoff so the result passes the unit-norm check.
  double norm2 = 0.0;
  for (const auto& z : out) norm2 += std::norm(z);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : out) z *= inv;
  return PureState(d, std::move(out));
}

double entangling_rate(const PureState& psi, const BipartiteOperator& h, EntanglingForm form,
                       double rank_tol) {
  const auto& d = psi.dims();
  if (h.dim_A() != d.A || h.dim_B() != d.B) {
    throw Error(ErrorKind::DimMismatch, "H_AB factors do not match the state");
  }
  const ComplexMatrix rho_aAB = reduced_aAB(psi);
  const ComplexMatrix rho_aA = reduced_aA(psi);
  ComplexMatrix log_op;
  if (form == EntanglingForm::LogTimesIdentity) {
    log_op = kron(support_log(rho_aA, rank_tol), ComplexMatrix::identity(d.B));
  } else {
    ComplexMatrix ext = kron(rho_aA, ComplexMatrix::identity(d.B));
    ext *= 1.0 / static_cast<double>(d.B);
    log_op = support_log(ext, rank_tol);
  }
  const ComplexMatrix lifted = kron(ComplexMatrix::identity(d.a), h.matrix());
  const Complex g = kI * trace_product(lifted, commutator(rho_aAB, log_op));
  if (std::abs(g.imag()) > kImagResidueTol * std::max(1.0, std::abs(g.real()))) {
    throw Error(ErrorKind::DomainError, "imaginary residue in entangling rate");
  }
  return g.real();
}

double fd_entangling_rate(const PureState& psi, const BipartiteOperator& h, double step,
                          double rank_tol) {
  if (!(step > 0.0)) throw Error(ErrorKind::DomainError, "finite-difference step must be positive");
  const auto ev = eigenvalues_hermitian(reduced_aA(psi));
  const double cut = rank_tol * ev.back();
  for (double l : ev) {
    if (l > cut && l < 1e3 * rank_tol) {
      throw Error(ErrorKind::IllConditioned, "rho_aA eigenvalue " + std::to_string(l));
    }
  }
  return (entanglement_entropy(evolve_pure(psi, h, step)) -
          entanglement_entropy(evolve_pure(psi, h, -step))) /
         (2.0 * step);
}

DensityMatrix bravyi_mu(const PureState& psi) {
  const auto& d = psi.dims();
  if (d.B == 1) throw Error(ErrorKind::Degenerate, "d_B = 1 makes the ensemble weight 1");
  if (d.B > d.A) {
    throw Error(ErrorKind::DimOrder, "d_B = " + std::to_string(d.B) + " exceeds d_A = " +
                                         std::to_string(d.A));
  }
  const double w = 1.0 / static_cast<double>(d.B * d.B);
  ComplexMatrix mixed = kron(reduced_aA(psi), ComplexMatrix::identity(d.B));
  mixed *= 1.0 / static_cast<double>(d.B);
  ComplexMatrix mu = mixed - reduced_aAB(psi) * w;
  mu *= 1.0 / (1.0 - w);
  const double lmin = eigenvalues_hermitian(mu).front();
  if (lmin < -1e-9) {
    throw Error(ErrorKind::PositivityViolation, "mu has eigenvalue " + std::to_string(lmin));
  }
  return DensityMatrix(mu);
}

SieReduction sie_to_sim(const PureState& psi, const BipartiteOperator& h, double rank_tol) {
  const auto& d = psi.dims();
  const double w = 1.0 / static_cast<double>(d.B * d.B);
  Ensemble ens({1.0 - w, w}, {bravyi_mu(psi), DensityMatrix(reduced_aAB(psi))});
  Hamiltonian lifted(kron(ComplexMatrix::identity(d.a), h.matrix()), h.hamiltonian().normalized());
  const std::size_t n = lifted.dim();
  const HamiltonianSet hams({Hamiltonian(ComplexMatrix::zero(n)), lifted});
  const double lambda = mixing_rate(ens, hams, rank_tol);
  const double gamma = entangling_rate(psi, h, EntanglingForm::LogTimesIdentity, rank_tol);
  return {std::move(ens), std::move(lifted), lambda, gamma, std::abs(lambda - w * gamma)};
}

std::vector<StePoint> ste_check(const PureState& psi, const BipartiteOperator& h,
                                std::span<const double> ts) {
  const auto& d = psi.dims();
  const double bound =
      entanglement_entropy(psi) + 2.0 * std::log(static_cast<double>(std::min(d.A, d.B)));
  std::vector<StePoint> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const double e = entanglement_entropy(evolve_pure(psi, h, t));
    out.push_back({t, e, bound, e <= bound + kSteSlack});
  }
  return out;
}

namespace {

nlohmann::json parse_doc(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::vector<std::size_t> read_dims(const nlohmann::json& doc, std::size_t expected) {
  if (!doc.is_object() || !doc.contains("dims") || !doc["dims"].is_array() ||
      doc["dims"].size() != expected) {
    throw Error(ErrorKind::ParseError,
                "\"dims\" must be an array of " + std::to_string(expected) + " integers");
  }
  std::vector<std::size_t> out;
  for (const auto& v : doc["dims"]) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw Error(ErrorKind::ParseError, "factor dimensions must be positive integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace

PureState parse_pure_state(std::string_view text) {
  const auto doc = parse_doc(text);
  const auto dims = read_dims(doc, 4);
  if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
    throw Error(ErrorKind::ParseError, "missing array \"amplitudes\"");
  }
  std::vector<Complex> amps;
  for (const auto& z : doc["amplitudes"]) {
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
      throw Error(ErrorKind::ParseError, "amplitude must be a [re, im] pair");
    }
    amps.emplace_back(z[0].get<double>(), z[1].get<double>());
  }
  return PureState({dims[0], dims[1], dims[2], dims[3]}, std::move(amps));
}

std::string serialize_pure_state(const PureState& psi) {
  nlohmann::json doc;
  const auto d = psi.dims().as_array();
  doc["dims"] = std::vector<std::size_t>(d.begin(), d.end());
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& z : psi.amplitudes()) amps.push_back({z.real(), z.imag()});
  doc["amplitudes"] = std::move(amps);
  return doc.dump();
}

BipartiteOperator parse_bipartite_operator(std::string_view text, bool normalized) {
  const auto doc = parse_doc(text);
  const auto dims = read_dims(doc, 2);
  const auto hams = parse_hamiltonians(text);
  if (hams.size() != 1) {
    throw Error(ErrorKind::ParseError, "bipartite operator file must hold exactly one matrix");
  }
  return BipartiteOperator(hams[0].matrix(), dims[0], dims[1], normalized);
}

std::string serialize_bipartite_operator(const BipartiteOperator& h) {
  auto doc = nlohmann::json::parse(serialize_hamiltonians(HamiltonianSet({h.hamiltonian()})));
  doc["dims"] = {h.dim_A(), h.dim_B()};
  return doc.dump();
}

}  // namespace mixrate
