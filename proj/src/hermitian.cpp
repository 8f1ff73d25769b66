#include "mixrate/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mixrate {

ComplexMatrix symmetrize_checked(const ComplexMatrix& m) {
  if (!m.is_finite()) throw Error(ErrorKind::DomainError, "non-finite matrix entry");
  const double scale = std::max(1.0, m.frobenius_norm());
  const double residual = hermiticity_residual(m);
  if (residual > kHermitianTol * scale) {
    throw Error(ErrorKind::NonHermitian,
                "||M - M^dagger||_F = " + std::to_string(residual));
  }
  ComplexMatrix out = m + m.adjoint();
  out *= 0.5;
  return out;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Zeroes a(p,q) with the unitary J = diag(1, e^{-i phi}) * [[c, s], [-s, c]],
// updating a <- J^dagger a J and v <- v J.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = std::conj(apq) / mag;  // e^{-i phi}

  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;
  const std::size_t n = a.dim();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

EigenDecomposition eig_hermitian(const ComplexMatrix& m) {
  ComplexMatrix a = symmetrize_checked(m);
  const std::size_t n = a.dim();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = kJacobiOffDiagTol * a.frobenius_norm();

  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweep++ >= kJacobiSweepCap) {
      throw Error(ErrorKind::NoConvergence,
                  "Jacobi sweep cap reached at dim " + std::to_string(n));
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m) {
  return eig_hermitian(m).values;
}

ComplexMatrix support_log(const EigenDecomposition& eig, double rank_tol) {
  if (!(rank_tol > 0.0)) throw Error(ErrorKind::DomainError, "rank_tol must be positive");
  if (eig.values.empty()) return ComplexMatrix();
  const double lmax = eig.values.back();
  if (lmax < 0.0) throw Error(ErrorKind::DomainError, "matrix is not positive semidefinite");
  const double cut = rank_tol * lmax;
  if (eig.values.front() < -cut) {
    throw Error(ErrorKind::DomainError,
                "eigenvalue " + std::to_string(eig.values.front()) + " below -rank_tol*lambda_max");
  }
  return apply_spectral(eig, [cut](double l) { return l <= cut ? 0.0 : std::log(l); });
}

ComplexMatrix support_log(const ComplexMatrix& m, double rank_tol) {
  return support_log(eig_hermitian(m), rank_tol);
}

double trace_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (double l : eigenvalues_hermitian(m)) s += std::abs(l);
  return s;
}

SignProjectors spectral_sign_projectors(const ComplexMatrix& m, double zero_tol) {
  const EigenDecomposition eig = eig_hermitian(m);
  return {apply_spectral(eig, [zero_tol](double l) { return l > zero_tol ? 1.0 : 0.0; }),
          apply_spectral(eig, [zero_tol](double l) { return l < -zero_tol ? 1.0 : 0.0; })};
}

double log_integral_check(double x, double upper_cutoff, std::size_t n_points) {
  if (!(x > 0.0)) throw Error(ErrorKind::DomainError, "log_integral_check needs x > 0");
  if (!(upper_cutoff > 0.0) || n_points == 0) {
    throw Error(ErrorKind::DomainError, "cutoff and point count must be positive");
  }
  // t = u/(1-u): dt = du/(1-u)^2 and the integrand becomes (x-1)/(x(1-u) + u).
  const double u_max = upper_cutoff / (1.0 + upper_cutoff);
  const double h = u_max / static_cast<double>(n_points);
  double sum = 0.0;
  for (std::size_t k = 0; k < n_points; ++k) {
    const double u = (static_cast<double>(k) + 0.5) * h;
    sum += 1.0 / (x * (1.0 - u) + u);
  }
  return (x - 1.0) * sum * h;
}

}  // namespace mixrate
