#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "mixrate/ensemble.hpp"
#include "mixrate/hermitian.hpp"

namespace mixrate {

inline constexpr double kDefaultFdStep = 1e-4;
inline constexpr double kImagResidueTol = 1e-9;

/// i[rho_x, ln rho] for every member, with ln rho = support_log(rho).
/// These Hermitian generators carry all the rate information:
/// mixing_rate = sum_x p_x Tr(H_x A_x).
std::vector<ComplexMatrix> rate_generators(const Ensemble& e, double rank_tol = kDefaultRankTol);

/// dS(rho(t))/dt at t = 0 for rho(t) = sum_x p_x e^{-iH_x t} rho_x e^{iH_x t},
/// evaluated as i sum_x p_x Tr(H_x [rho_x, ln rho]).
/// Throws DimMismatch, DegenerateState (member support leaves supp rho).
double mixing_rate(const Ensemble& e, const HamiltonianSet& hams,
                   double rank_tol = kDefaultRankTol);

/// Central difference [S(rho(h)) - S(rho(-h))] / (2h). Throws RankDeficient
/// when the smallest eigenvalue of rho is below 1e3 * rank_tol.
double fd_mixing_rate(const Ensemble& e, const HamiltonianSet& hams, double h = kDefaultFdStep,
                      double rank_tol = kDefaultRankTol);

/// Richardson combination of central differences at h and h/2.
double fd_mixing_rate_richardson(const Ensemble& e, const HamiltonianSet& hams, double h,
                                 double rank_tol = kDefaultRankTol);

/// H_x = P_pos(A_x) - P_neg(A_x) + P_ker(A_x), the unitary involution that
/// attains +max_mixing_rate.
HamiltonianSet optimal_hamiltonians(const Ensemble& e, double rank_tol = kDefaultRankTol);

/// sup over -I <= H_x <= I of |mixing_rate| = sum_x p_x ||[rho_x, ln rho]||_1.
double max_mixing_rate(const Ensemble& e, double rank_tol = kDefaultRankTol);

/// Two-member ensemble with only the second member evolving:
/// p ||[rho_1, ln rho]||_1. Throws NotBinary.
double binary_max_rate(const Ensemble& e, double rank_tol = kDefaultRankTol);

/// 4 sqrt(p(1-p)). DomainError outside [0, 1].
double bound_theorem_binary(double p);

/// 4 sum_{x != x0} sum_{y != x} sqrt(p_x p_y), x0 = first index of the
/// largest probability. Throws BadDistribution.
double bound_theorem_general(std::span<const double> probs);

struct StmPoint {
  double t;
  double entropy;
  double lower;
  double upper;
  bool ok;
};

inline constexpr double kStmSlack = 1e-9;

/// Checks avg S <= S(rho(t)) <= avg S + S(X) at each t.
std::vector<StmPoint> stm_check(const Ensemble& e, const HamiltonianSet& hams,
                                std::span<const double> ts);

struct AkGap {
  double lhs;       // ||[B, ln(A+B)]||_1
  double rhs_unit;  // F(a+b) - F(a) - F(b) with F(x) = x ln x - x, a = Tr A, b = Tr B
};

/// Throws DomainError when A or B is not PSD or A+B is rank-deficient.
AkGap ak_gap(const ComplexMatrix& a, const ComplexMatrix& b, double rank_tol = kDefaultRankTol);

struct RateReport {
  double mixing_rate_at_H = 0.0;
  double max_rate = 0.0;
  std::optional<double> binary_max_rate;
  double bound_thm = 0.0;
  double bound_conjecture = 0.0;
  std::optional<double> fd_residual;  // absent when rho is too close to singular
  std::optional<double> ratio_thm;
  std::optional<double> ratio_conjecture;
};

/// Full report for one ensemble; when `hams` is absent the optimal set is used.
RateReport rate_report(const Ensemble& e, const HamiltonianSet* hams,
                       double rank_tol = kDefaultRankTol, double fd_step = kDefaultFdStep);

nlohmann::json to_json(const RateReport& r);

}  // namespace mixrate
