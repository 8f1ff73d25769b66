#include "mixrate/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "mixrate/error.hpp"
#include "mixrate/sampling.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mixrate {

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw Error(ErrorKind::DomainError, msg); };
  if (dim < 1 || dim > kMaxDim) fail("dim must lie in [1, 64]");
  if (dim_max != 0 && (dim_max < dim || dim_max > kMaxDim)) fail("dim_max must lie in [dim, 64]");
  if (n_states < 1) fail("n_states must be >= 1");
  if (n_states_max != 0 && n_states_max < n_states) fail("n_states_max must be >= n_states");
  if (n_trials < 1) fail("n_trials must be >= 1");
  if (!(fd_step > 0.0) || !(rank_tol > 0.0)) fail("tolerances must be positive");
  if (mode == Mode::Search) {
    if (!(search.step > 0.0)) fail("search step must be positive");
    if (!(search.shrink > 0.0 && search.shrink < 1.0)) fail("shrink factor must lie in (0, 1)");
    if (search.restarts < 1) fail("restarts must be >= 1");
    if (search.fixed_p && !(*search.fixed_p > 0.0 && *search.fixed_p < 1.0)) {
      fail("fixed p must lie in (0, 1)");
    }
    if (!search.binary && n_states < 2) fail("search needs at least two states");
  }
}

bool TrialRecord::same_result(const TrialRecord& o) const {
  return trial_id == o.trial_id && seed == o.seed && dim == o.dim && n_states == o.n_states &&
         probabilities == o.probabilities && max_rate == o.max_rate &&
         binary_max_rate == o.binary_max_rate && bound_thm == o.bound_thm &&
         shannon == o.shannon && ratio_thm == o.ratio_thm && ratio_conj == o.ratio_conj &&
         fd_residual == o.fd_residual && stm_ok == o.stm_ok && error == o.error;
}

bool theorem_guards_ok(const TrialRecord& r) {
  if (r.error) return false;
  if (r.ratio_thm && *r.ratio_thm > 1.0 + kTheoremSlack) return false;
  return r.stm_ok && r.fd_residual <= kFdGuard;
}

bool conjecture_flagged(const TrialRecord& r) {
  return r.ratio_conj && *r.ratio_conj > 1.0 + kConjectureSlack;
}

namespace {

std::size_t draw_in_range(std::size_t lo, std::size_t hi, Rng& rng) {
  if (hi <= lo) return lo;
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

std::optional<double> ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return std::nullopt;
}

// Fills everything but identity/timing fields. With `binary_view` the
// bound, entropy and ratios use the one-member-evolves normalization.
void evaluate_into(TrialRecord& r, const Ensemble& e, const HamiltonianSet& stm_hams,
                   const ExperimentConfig& cfg, bool binary_view) {
  r.dim = e.dim();
  r.n_states = e.size();
  r.probabilities.assign(e.probabilities().begin(), e.probabilities().end());
  try {
    r.max_rate = max_mixing_rate(e, cfg.rank_tol);
    if (e.size() == 2) r.binary_max_rate = binary_max_rate(e, cfg.rank_tol);
    if (binary_view) {
      const double p = e.probability(0);
      r.bound_thm = bound_theorem_binary(p);
      r.shannon = binary_entropy(p);
      r.ratio_thm = ratio(*r.binary_max_rate, r.bound_thm);
      r.ratio_conj = ratio(*r.binary_max_rate, r.shannon);
    } else {
      r.bound_thm = bound_theorem_general(e.probabilities());
      r.shannon = shannon_entropy(e.probabilities());
      r.ratio_thm = ratio(r.max_rate, r.bound_thm);
      r.ratio_conj = ratio(r.max_rate, r.shannon);
    }
    const HamiltonianSet opt = optimal_hamiltonians(e, cfg.rank_tol);
    r.fd_residual = std::abs(mixing_rate(e, opt, cfg.rank_tol) -
                             fd_mixing_rate(e, opt, cfg.fd_step, cfg.rank_tol));
    const auto stm = stm_check(e, stm_hams, kStmTimes);
    r.stm_ok = std::all_of(stm.begin(), stm.end(), [](const StmPoint& s) { return s.ok; });
  } catch (const std::exception& ex) {
    r.error = ex.what();
    r.stm_ok = false;
  }
}

template <class Fn>
std::vector<TrialRecord> parallel_map(std::size_t n, int workers, Fn&& fn) {
  std::vector<TrialRecord> out(n);
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
  for (long long i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = fn(static_cast<std::uint64_t>(i));
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TrialSample draw_trial(const ExperimentConfig& cfg, std::uint64_t trial_id) {
  Rng rng(cfg.seed, trial_id);
  const std::size_t dim = draw_in_range(cfg.dim, cfg.dim_max, rng);
  const std::size_t n = draw_in_range(cfg.n_states, cfg.n_states_max, rng);
  Ensemble e = sample_ensemble(dim, n, rng);
  HamiltonianSet hams = sample_hamiltonian_set(dim, n, rng);
  return {std::move(e), std::move(hams)};
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_id) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord r;
  r.trial_id = trial_id;
  r.seed = cfg.seed;
  try {
    const TrialSample s = draw_trial(cfg, trial_id);
    evaluate_into(r, s.ensemble, s.hamiltonians, cfg, false);
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  r.elapsed = seconds_since(start);
  return r;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  return parallel_map(cfg.n_trials, workers,
                      [&cfg](std::uint64_t id) { return run_trial(cfg, id); });
}

std::vector<TrialRecord> run_trials_serial(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TrialRecord> out;
  out.reserve(cfg.n_trials);
  for (std::uint64_t id = 0; id < cfg.n_trials; ++id) out.push_back(run_trial(cfg, id));
  return out;
}

std::vector<double> parse_p_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad p-grid component '" + item + "'");
    }
  }
  if (parts.size() != 3) throw Error(ErrorKind::ParseError, "p-grid must be start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start) throw Error(ErrorKind::ParseError, "p-grid must ascend");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
  for (double p : grid) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::DomainError, "p-grid must lie in (0, 1)");
  }
  return grid;
}

TrialSample draw_scan_trial(double p, const ExperimentConfig& cfg, std::uint64_t trial_id) {
  Rng rng(cfg.seed, trial_id);
  const std::size_t dim = draw_in_range(cfg.dim, cfg.dim_max, rng);
  std::vector<DensityMatrix> states{sample_density(dim, rng), sample_density(dim, rng)};
  Ensemble e({p, 1.0 - p}, std::move(states));
  HamiltonianSet hams = sample_hamiltonian_set(dim, 2, rng);
  return {std::move(e), std::move(hams)};
}

std::vector<TrialRecord> scan_binary(std::span<const double> p_grid, const ExperimentConfig& cfg,
                                     int workers) {
  cfg.validate();
  for (double p : p_grid) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::DomainError, "scan p must lie in (0, 1)");
  }
  const std::size_t per_p = cfg.n_trials;
  return parallel_map(p_grid.size() * per_p, workers, [&](std::uint64_t id) {
    const auto start = std::chrono::steady_clock::now();
    const double p = p_grid[id / per_p];
    TrialRecord r;
    r.trial_id = id;
    r.seed = cfg.seed;
    try {
      const TrialSample s = draw_scan_trial(p, cfg, id);
      evaluate_into(r, s.ensemble, s.hamiltonians, cfg, true);
    } catch (const std::exception& ex) {
      r.error = ex.what();
    }
    r.elapsed = seconds_since(start);
    return r;
  });
}

std::vector<ScanRow> summarize_scan(std::span<const TrialRecord> records) {
  std::vector<ScanRow> rows;
  std::map<double, std::size_t> index;
  for (const auto& r : records) {
    if (r.probabilities.empty()) continue;
    const double p = r.probabilities.front();
    auto [it, inserted] = index.try_emplace(p, rows.size());
    if (inserted) rows.push_back({p, 0.0, r.bound_thm, r.shannon, 0.0, 0.0});
    ScanRow& row = rows[it->second];
    row.max_binary_rate = std::max(row.max_binary_rate, r.binary_max_rate.value_or(0.0));
    row.max_ratio_thm = std::max(row.max_ratio_thm, r.ratio_thm.value_or(0.0));
    row.max_ratio_conj = std::max(row.max_ratio_conj, r.ratio_conj.value_or(0.0));
  }
  return rows;
}

namespace {

double search_objective(const Ensemble& e, const ExperimentConfig& cfg) {
  const double max_rate = max_mixing_rate(e, cfg.rank_tol);
  const double bound = bound_theorem_general(e.probabilities());
  if (max_rate > bound + kTheoremSlack) {
    throw Error(ErrorKind::TheoremViolation, "max rate " + std::to_string(max_rate) +
                                                 " exceeds general bound " + std::to_string(bound));
  }
  if (cfg.search.binary) {
    const double p = e.probability(0);
    const double b = binary_max_rate(e, cfg.rank_tol);
    if (b > bound_theorem_binary(p) + kTheoremSlack) {
      throw Error(ErrorKind::TheoremViolation, "binary rate exceeds 4 sqrt(p(1-p))");
    }
    return b / binary_entropy(p);
  }
  return max_rate / shannon_entropy(e.probabilities());
}

Ensemble initial_search_ensemble(const ExperimentConfig& cfg, Rng& rng) {
  const std::size_t n = cfg.search.binary ? 2 : cfg.n_states;
  Ensemble e = sample_ensemble(cfg.dim, n, rng);
  if (cfg.search.binary && cfg.search.fixed_p) {
    const double p = *cfg.search.fixed_p;
    return Ensemble({p, 1.0 - p}, e.states());
  }
  return e;
}

Ensemble perturb(const Ensemble& e, double eps, const ExperimentConfig& cfg, Rng& rng) {
  std::vector<DensityMatrix> states;
  states.reserve(e.size());
  for (std::size_t x = 0; x < e.size(); ++x) {
    // e^{i eps G} rho e^{-i eps G}
    const ComplexMatrix u = unitary_propagator(sample_hamiltonian(e.dim(), rng), -eps);
    states.emplace_back(u * e.state(x).matrix() * u.adjoint(), x);
  }
  std::vector<double> probs(e.probabilities().begin(), e.probabilities().end());
  if (!(cfg.search.binary && cfg.search.fixed_p)) {
    double total = 0.0;
    for (auto& p : probs) {
      p = std::exp(std::log(p) + eps * rng.gaussian());
      total += p;
    }
    double floored_total = 0.0;
    for (auto& p : probs) {
      p = std::max(p / total, kMinSampledProbability);
      floored_total += p;
    }
    for (auto& p : probs) p /= floored_total;
  }
  return Ensemble(std::move(probs), std::move(states));
}

}  // namespace

SearchResult search_ratio(const ExperimentConfig& cfg, const std::optional<Ensemble>& initial) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::optional<Ensemble> best;
  double best_obj = -1.0;
  std::uint64_t best_restart = 0;
  std::size_t iterations = 0, accepted = 0;

  for (std::uint64_t restart = 0; restart < cfg.search.restarts; ++restart) {
    Rng rng(cfg.seed, restart);
    Ensemble current = (restart == 0 && initial) ? *initial : initial_search_ensemble(cfg, rng);
    if (cfg.search.binary && current.size() != 2) {
      throw Error(ErrorKind::NotBinary, "binary search needs a two-member ensemble");
    }
    double current_obj = search_objective(current, cfg);
    double eps = cfg.search.step;
    std::size_t misses = 0;
    for (std::size_t it = 0; it < cfg.search.max_iters && eps >= kMinSearchStep; ++it) {
      ++iterations;
      Ensemble candidate = perturb(current, eps, cfg, rng);
      const double obj = search_objective(candidate, cfg);
      if (obj > current_obj) {
        current = std::move(candidate);
        current_obj = obj;
        misses = 0;
        ++accepted;
      } else if (++misses >= kRejectionsBeforeShrink) {
        eps *= cfg.search.shrink;
        misses = 0;
      }
    }
    if (current_obj > best_obj) {
      best_obj = current_obj;
      best = std::move(current);
      best_restart = restart;
    }
  }

  SearchResult out{TrialRecord{}, *best, best_obj, iterations, accepted};
  out.best.trial_id = best_restart;
  out.best.seed = cfg.seed;
  Rng stm_rng(cfg.seed, ~std::uint64_t{0});
  const HamiltonianSet stm_hams = sample_hamiltonian_set(best->dim(), best->size(), stm_rng);
  evaluate_into(out.best, *best, stm_hams, cfg, cfg.search.binary);
  out.best.elapsed = seconds_since(start);
  return out;
}

}  // namespace mixrate
