#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mixrate/complex_matrix.hpp"
#include "mixrate/error.hpp"

namespace mixrate {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-12;
inline constexpr int kJacobiSweepCap = 100;
inline constexpr double kJacobiOffDiagTol = 1e-13;

/// Eigenvalues ascending; column k of `vectors` belongs to `values[k]`.
/// Within a degenerate eigenspace the basis is arbitrary.
struct EigenDecomposition {
  std::vector<double> values;
  ComplexMatrix vectors;
};

/// Returns (M + M^dagger)/2, or throws NonHermitian when
/// ||M - M^dagger||_F > 1e-10 * max(1, ||M||_F).
ComplexMatrix symmetrize_checked(const ComplexMatrix& m);

/// Cyclic complex Jacobi. Throws NonHermitian, NoConvergence (more than
/// kJacobiSweepCap sweeps), DomainError on non-finite input.
EigenDecomposition eig_hermitian(const ComplexMatrix& m);

/// Convenience: eigenvalues only, ascending.
std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m);

/// V diag(f(lambda)) V^dagger for an existing decomposition. `f` may return
/// double or Complex; a non-finite value at any eigenvalue throws DomainError.
template <class F>
ComplexMatrix apply_spectral(const EigenDecomposition& eig, F&& f) {
  const std::size_t n = eig.values.size();
  std::vector<Complex> fv(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex v = Complex(f(eig.values[k]));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorKind::DomainError,
                  "function undefined at eigenvalue " + std::to_string(eig.values[k]));
    }
    fv[k] = v;
  }
  const ComplexMatrix& vecs = eig.vectors;
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += vecs(i, k) * fv[k] * std::conj(vecs(j, k));
      out(i, j) = s;
    }
  return out;
}

/// f(M) for Hermitian M via its spectrum.
template <class F>
ComplexMatrix matrix_fn(const ComplexMatrix& m, F&& f) {
  return apply_spectral(eig_hermitian(m), std::forward<F>(f));
}

/// Logarithm on the support of a PSD matrix, extended by 0 on the kernel.
/// Eigenvalues <= rank_tol * lambda_max count as kernel; any eigenvalue
/// below -rank_tol * lambda_max throws DomainError.
ComplexMatrix support_log(const ComplexMatrix& m, double rank_tol = kDefaultRankTol);
ComplexMatrix support_log(const EigenDecomposition& eig, double rank_tol = kDefaultRankTol);

/// Sum of |lambda_i| for Hermitian M.
double trace_norm(const ComplexMatrix& m);

struct SignProjectors {
  ComplexMatrix positive;
  ComplexMatrix negative;
};

/// Projectors onto the eigenspaces with lambda > zero_tol and
/// lambda < -zero_tol. The band |lambda| <= zero_tol belongs to neither.
SignProjectors spectral_sign_projectors(const ComplexMatrix& m, double zero_tol);

/// Midpoint-rule estimate of  int_0^cutoff (1/(1+t) - 1/(x+t)) dt, which
/// tends to ln x as cutoff and n_points grow. The integral is taken in
/// u = t/(1+t) so the integrand is smooth on a bounded interval.
double log_integral_check(double x, double upper_cutoff, std::size_t n_points);

}  // namespace mixrate
