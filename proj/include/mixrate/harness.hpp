#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixrate/ensemble.hpp"
#include "mixrate/hermitian.hpp"
#include "mixrate/rates.hpp"

namespace mixrate {

inline constexpr std::size_t kMaxDim = 64;
inline constexpr double kTheoremSlack = 1e-8;
inline constexpr double kFdGuard = 1e-6;
inline constexpr double kConjectureSlack = 1e-6;

enum class Mode { Verify, Scan, Search, Sie };

struct SearchParams {
  double step = 0.1;         // initial epsilon
  double shrink = 0.5;       // epsilon *= shrink after kRejectionsBeforeShrink misses
  std::size_t max_iters = 1000;
  std::size_t restarts = 1;
  bool binary = false;       // objective binary_max_rate / S(p) instead of max_rate / S(X)
  std::optional<double> fixed_p;  // binary mode only: pin p
};

inline constexpr std::size_t kRejectionsBeforeShrink = 20;
inline constexpr double kMinSearchStep = 1e-6;

/// dim and n_states are lower ends of uniform ranges when dim_max /
/// n_states_max exceed them; each trial draws its own size from its stream.
struct ExperimentConfig {
  std::size_t dim = 2;
  std::size_t dim_max = 0;
  std::size_t n_states = 2;
  std::size_t n_states_max = 0;
  std::size_t n_trials = 1;
  std::uint64_t seed = 0;
  double fd_step = kDefaultFdStep;
  double rank_tol = kDefaultRankTol;
  Mode mode = Mode::Verify;
  SearchParams search;

  /// Throws DomainError on out-of-range settings.
  void validate() const;
};

struct TrialRecord {
  std::uint64_t trial_id = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::size_t n_states = 0;
  std::vector<double> probabilities;
  double max_rate = 0.0;
  std::optional<double> binary_max_rate;
  double bound_thm = 0.0;
  double shannon = 0.0;
  std::optional<double> ratio_thm;
  std::optional<double> ratio_conj;
  double fd_residual = 0.0;
  bool stm_ok = false;
  double elapsed = 0.0;
  std::optional<std::string> error;

  /// Field-wise equality ignoring `elapsed`.
  bool same_result(const TrialRecord& other) const;
};

/// ratio_thm <= 1 + 1e-8, stm_ok, fd_residual <= 1e-6, and no error.
bool theorem_guards_ok(const TrialRecord& r);
/// ratio_conj > 1 + 1e-6.
bool conjecture_flagged(const TrialRecord& r);

struct TrialSample {
  Ensemble ensemble;
  HamiltonianSet hamiltonians;  // random normalized set used for the STM check
};

/// The ensemble and Hamiltonians trial `trial_id` evaluates; a pure
/// function of (cfg.seed, trial_id).
TrialSample draw_trial(const ExperimentConfig& cfg, std::uint64_t trial_id);

inline constexpr double kStmTimes[] = {0.5, 1.0, 2.0};

/// Evaluates max rate, general bound, Shannon entropy, fd residual at the
/// optimal Hamiltonians, and the STM check. Numeric errors land in
/// record.error instead of propagating.
TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_id);

/// Trials 0..n_trials-1 on `workers` OpenMP threads; output ordered by trial_id.
std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, int workers);
/// Plain loop; the reference the parallel runner is checked against.
std::vector<TrialRecord> run_trials_serial(const ExperimentConfig& cfg);

/// Parses "start:stop:step" (inclusive of stop up to rounding).
std::vector<double> parse_p_grid(const std::string& text);

/// The binary ensemble {(p, rho_1), (1-p, rho_2)} behind scan record `trial_id`.
TrialSample draw_scan_trial(double p, const ExperimentConfig& cfg, std::uint64_t trial_id);

/// For each p, cfg.n_trials binary ensembles {(p, rho_1), (1-p, rho_2)}.
/// In these records bound_thm = 4 sqrt(p(1-p)), shannon = S(p),
/// ratio_thm = binary_max_rate / bound_thm, ratio_conj = binary_max_rate / S(p).
/// trial_id = p_index * n_trials + k.
std::vector<TrialRecord> scan_binary(std::span<const double> p_grid, const ExperimentConfig& cfg,
                                     int workers = 1);

struct ScanRow {
  double p;
  double max_binary_rate;
  double bound_thm;
  double shannon;
  double max_ratio_thm;
  double max_ratio_conj;
};

/// Per-p maxima of a scan, in grid order.
std::vector<ScanRow> summarize_scan(std::span<const TrialRecord> records);

struct SearchResult {
  TrialRecord best;
  Ensemble best_ensemble;
  double best_objective;
  std::size_t iterations;  // total over restarts
  std::size_t accepted;
};

/// Hill-climbs the conjecture ratio (see SearchParams::binary) with random
/// restarts. `initial`, when given, seeds the first restart. Asserts
/// max_rate <= bound_theorem_general at every evaluated point and throws
/// TheoremViolation otherwise.
SearchResult search_ratio(const ExperimentConfig& cfg,
                          const std::optional<Ensemble>& initial = std::nullopt);

}  // namespace mixrate
