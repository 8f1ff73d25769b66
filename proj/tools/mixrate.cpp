// mixrate: command-line front end for the mixing-rate toolkit.
//
// Exit status: 0 ok, 1 usage / IO / bad input, 2 a theorem guard failed,
// 3 a conjecture ratio exceeded 1 (offending ensembles are written out).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "mixrate/entangling.hpp"
#include "mixrate/ensemble_io.hpp"
#include "mixrate/error.hpp"
#include "mixrate/harness.hpp"
#include "mixrate/rates.hpp"
#include "mixrate/report.hpp"

using namespace mixrate;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitGuard = 2;
constexpr int kExitConjecture = 3;

int resolve_workers(int requested) {
  if (const char* env = std::getenv("MIXRATE_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
    std::cerr << "mixrate: ignoring invalid MIXRATE_WORKERS='" << env << "'\n";
  }
  if (requested >= 1) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

// Flagged ensembles go to `path` when given, else to stderr.
void emit_flagged(const json& flagged, const std::string& path) {
  const std::string text = flagged.dump(2) + "\n";
  if (path.empty()) {
    std::cerr << text;
  } else {
    write_text_file(path, text);
  }
}

json flagged_entry(const TrialRecord& r, const Ensemble& e) {
  return {{"trial_id", r.trial_id},
          {"seed", r.seed},
          {"ratio_conj", r.ratio_conj.value_or(0.0)},
          {"ensemble", json::parse(serialize_ensemble(e))}};
}

struct Tally {
  std::size_t guard_failures = 0;
  std::size_t flagged = 0;
  double max_ratio_thm = 0.0;
  double max_ratio_conj = 0.0;
};

Tally tally(const std::vector<TrialRecord>& recs) {
  Tally t;
  for (const auto& r : recs) {
    if (!theorem_guards_ok(r)) {
      ++t.guard_failures;
      std::cerr << "mixrate: guard failure in trial " << r.trial_id;
      if (r.error) std::cerr << ": " << *r.error;
      std::cerr << '\n';
    }
    if (conjecture_flagged(r)) ++t.flagged;
    t.max_ratio_thm = std::max(t.max_ratio_thm, r.ratio_thm.value_or(0.0));
    t.max_ratio_conj = std::max(t.max_ratio_conj, r.ratio_conj.value_or(0.0));
  }
  std::cerr << "mixrate: " << recs.size() << " trials, max ratio_thm " << t.max_ratio_thm
            << ", max ratio_conj " << t.max_ratio_conj << ", " << t.flagged << " flagged\n";
  return t;
}

int status_of(const Tally& t) {
  if (t.guard_failures) return kExitGuard;
  if (t.flagged) return kExitConjecture;
  return kExitOk;
}

int error_status(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::TheoremViolation:
    case ErrorKind::PositivityViolation:
      return kExitGuard;
    default:
      return kExitUsage;
  }
}

// -- compute ---------------------------------------------------------------

struct ComputeArgs {
  std::string ensemble, hamiltonians, out;
  double tol = kDefaultRankTol;
};

int run_compute(const ComputeArgs& a) {
  const Ensemble e = parse_ensemble(read_text_file(a.ensemble));
  std::optional<HamiltonianSet> hams;
  if (!a.hamiltonians.empty()) {
    const HamiltonianSet all = parse_hamiltonians(read_text_file(a.hamiltonians));
    hams = all.size() == e.size() ? all : all.select(e.kept_indices());
  }
  const RateReport r = rate_report(e, hams ? &*hams : nullptr, a.tol);
  emit(to_json(r).dump(2) + "\n", a.out);

  const bool guard_ok = (!r.ratio_thm || *r.ratio_thm <= 1.0 + kTheoremSlack) &&
                        (!r.fd_residual || *r.fd_residual <= kFdGuard);
  if (!guard_ok) return kExitGuard;
  if (r.ratio_conjecture && *r.ratio_conjecture > 1.0 + kConjectureSlack) {
    std::cerr << "mixrate: ratio_conjecture " << *r.ratio_conjecture << " exceeds 1\n"
              << serialize_ensemble(e) << '\n';
    return kExitConjecture;
  }
  return kExitOk;
}

// -- verify ----------------------------------------------------------------

struct VerifyArgs {
  ExperimentConfig cfg;
  int workers = 0;
  std::string out, format = "csv", flagged;
};

int run_verify(VerifyArgs a) {
  a.cfg.mode = Mode::Verify;
  const auto recs = run_trials(a.cfg, resolve_workers(a.workers));
  emit(a.format == "json" ? format_json(recs) : format_csv(recs), a.out);

  const Tally t = tally(recs);
  if (t.flagged) {
    json flagged = json::array();
    for (const auto& r : recs) {
      if (!conjecture_flagged(r)) continue;
      flagged.push_back(flagged_entry(r, draw_trial(a.cfg, r.trial_id).ensemble));
    }
    emit_flagged(flagged, a.flagged);
  }
  return status_of(t);
}

// -- scan ------------------------------------------------------------------

struct ScanArgs {
  ExperimentConfig cfg;
  std::string p_grid = "0.01:0.99:0.01";
  int workers = 0;
  std::string out, flagged;
};

int run_scan(ScanArgs a) {
  a.cfg.mode = Mode::Scan;
  a.cfg.n_states = 2;
  const auto grid = parse_p_grid(a.p_grid);
  const auto recs = scan_binary(grid, a.cfg, resolve_workers(a.workers));
  emit(format_csv(recs), a.out);

  for (const auto& row : summarize_scan(recs)) {
    std::cerr << "p=" << row.p << " max_binary_rate=" << row.max_binary_rate
              << " bound_thm=" << row.bound_thm << " S(p)=" << row.shannon
              << " max_ratio_thm=" << row.max_ratio_thm << " max_ratio_conj=" << row.max_ratio_conj
              << '\n';
  }
  const Tally t = tally(recs);
  if (t.flagged) {
    json flagged = json::array();
    for (const auto& r : recs) {
      if (!conjecture_flagged(r)) continue;
      const double p = grid[r.trial_id / a.cfg.n_trials];
      flagged.push_back(flagged_entry(r, draw_scan_trial(p, a.cfg, r.trial_id).ensemble));
    }
    emit_flagged(flagged, a.flagged);
  }
  return status_of(t);
}

// -- search ----------------------------------------------------------------

struct SearchArgs {
  ExperimentConfig cfg;
  std::string init, out, flagged;
  double p = 0.0;
};

int run_search(SearchArgs a) {
  a.cfg.mode = Mode::Search;
  if (a.p > 0.0) a.cfg.search.fixed_p = a.p;
  std::optional<Ensemble> initial;
  if (!a.init.empty()) initial = parse_ensemble(read_text_file(a.init));

  const SearchResult res = search_ratio(a.cfg, initial);
  const nlohmann::ordered_json doc = {
      {"objective", res.best_objective},
      {"binary", a.cfg.search.binary},
      {"iterations", res.iterations},
      {"accepted", res.accepted},
      {"record", to_json(res.best)},
      {"ensemble", json::parse(serialize_ensemble(res.best_ensemble))}};
  emit(doc.dump(2) + "\n", a.out);

  std::cerr << "mixrate: best ratio " << res.best_objective << " after " << res.iterations
            << " iterations (" << res.accepted << " accepted)\n";
  if (!theorem_guards_ok(res.best)) return kExitGuard;
  if (res.best_objective > 1.0 + kConjectureSlack) {
    emit_flagged(json::array({flagged_entry(res.best, res.best_ensemble)}), a.flagged);
    return kExitConjecture;
  }
  return kExitOk;
}

// -- sie -------------------------------------------------------------------

struct SieArgs {
  std::string state, ham, out;
  double t_max = 5.0;
  std::size_t t_steps = 50;
};

int run_sie(const SieArgs& a) {
  const PureState psi = parse_pure_state(read_text_file(a.state));
  const BipartiteOperator h = parse_bipartite_operator(read_text_file(a.ham));
  const SieReduction red = sie_to_sim(psi, h);

  std::vector<double> ts;
  for (std::size_t k = 0; k <= a.t_steps; ++k) ts.push_back(a.t_max * double(k) / double(a.t_steps));
  bool ste_ok = true;
  json ste = json::array();
  for (const auto& pt : ste_check(psi, h, ts)) {
    ste.push_back({{"t", pt.t}, {"entropy", pt.entropy}, {"bound", pt.bound}, {"ok", pt.ok}});
    ste_ok = ste_ok && pt.ok;
  }

  const nlohmann::ordered_json doc = {
      {"entanglement_entropy", entanglement_entropy(psi)},
      {"entangling_rate", red.entangling_rate},
      {"mixing_rate", red.mixing_rate},
      {"weight", red.ensemble.probability(1)},
      {"identity_residual", red.identity_residual},
      {"ensemble", json::parse(serialize_ensemble(red.ensemble))},
      {"ste", ste},
      {"ste_ok", ste_ok}};
  emit(doc.dump(2) + "\n", a.out);
  return red.identity_residual <= 1e-8 && ste_ok ? kExitOk : kExitGuard;
}

void add_experiment_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--dim", cfg.dim, "Hilbert-space dimension (lower end when --dim-max is set)")
      ->check(CLI::Range(std::size_t{1}, kMaxDim));
  cmd->add_option("--dim-max", cfg.dim_max, "Upper end of a per-trial dimension range");
  cmd->add_option("--trials", cfg.n_trials, "Number of trials")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Base RNG seed");
  cmd->add_option("--fd-step", cfg.fd_step, "Finite-difference step");
  cmd->add_option("--tol", cfg.rank_tol, "Rank tolerance for support logarithms");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixing and entangling rates of quantum ensembles"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Rates, maxima and bounds for one ensemble");
  c->add_option("--ensemble", compute.ensemble, "Ensemble JSON")->required();
  c->add_option("--hamiltonians", compute.hamiltonians, "Hamiltonian set JSON (default: optimal)");
  c->add_option("--out", compute.out, "Write the report here instead of stdout");
  c->add_option("--tol", compute.tol, "Rank tolerance");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Seeded property trials over random ensembles");
  add_experiment_options(v, verify.cfg);
  v->add_option("--states", verify.cfg.n_states, "Ensemble size (lower end when --states-max is set)");
  v->add_option("--states-max", verify.cfg.n_states_max, "Upper end of a per-trial size range");
  v->add_option("--workers", verify.workers, "Worker threads (MIXRATE_WORKERS overrides)");
  v->add_option("--out", verify.out, "Report path (default stdout)");
  v->add_option("--format", verify.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  v->add_option("--flagged", verify.flagged, "Where to write flagged ensembles (default stderr)");

  ScanArgs scan;
  auto* s = app.add_subcommand("scan", "Binary ensembles over a grid of p");
  add_experiment_options(s, scan.cfg);
  s->add_option("--p-grid", scan.p_grid, "start:stop:step");
  s->add_option("--workers", scan.workers, "Worker threads (MIXRATE_WORKERS overrides)");
  s->add_option("--out", scan.out, "CSV path (default stdout)");
  s->add_option("--flagged", scan.flagged, "Where to write flagged ensembles (default stderr)");

  SearchArgs search;
  auto* h = app.add_subcommand("search", "Hill-climb the conjecture ratio");
  h->add_option("--dim", search.cfg.dim, "Hilbert-space dimension")
      ->check(CLI::Range(std::size_t{1}, kMaxDim));
  h->add_option("--states", search.cfg.n_states, "Ensemble size (ignored with --binary)");
  h->add_option("--iters", search.cfg.search.max_iters, "Iterations per restart");
  h->add_option("--seed", search.cfg.seed, "Base RNG seed");
  h->add_flag("--binary", search.cfg.search.binary, "Optimize binary_max_rate / S(p)");
  h->add_option("--p", search.p, "Pin p in binary mode")->check(CLI::Range(0.0, 1.0));
  h->add_option("--step", search.cfg.search.step, "Initial perturbation size");
  h->add_option("--shrink", search.cfg.search.shrink, "Step shrink factor");
  h->add_option("--restarts", search.cfg.search.restarts, "Random restarts");
  h->add_option("--init", search.init, "Starting ensemble JSON for the first restart");
  h->add_option("--tol", search.cfg.rank_tol, "Rank tolerance");
  h->add_option("--out", search.out, "Result path (default stdout)");
  h->add_option("--flagged", search.flagged, "Where to write a flagged ensemble (default stderr)");

  SieArgs sie;
  auto* e = app.add_subcommand("sie", "Entangling rate and its mixing-rate reduction");
  e->add_option("--state", sie.state, "Pure state JSON")->required();
  e->add_option("--ham", sie.ham, "Bipartite Hamiltonian JSON")->required();
  e->add_option("--t-max", sie.t_max, "End of the entanglement-check time grid");
  e->add_option("--t-steps", sie.t_steps, "Intervals in the time grid");
  e->add_option("--out", sie.out, "Result path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c) return run_compute(compute);
    if (*v) return run_verify(verify);
    if (*s) return run_scan(scan);
    if (*h) return run_search(search);
    if (*e) return run_sie(sie);
  } catch (const Error& err) {
    std::cerr << "mixrate: " << err.what() << '\n';
    return error_status(err);
  } catch (const std::exception& err) {
    std::cerr << "mixrate: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
