// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance <path-to-mixrate> <test-data-dir>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixrate/entangling.hpp"
#include "mixrate/ensemble_io.hpp"
#include "mixrate/error.hpp"
#include "mixrate/harness.hpp"
#include "mixrate/rates.hpp"
#include "mixrate/report.hpp"
#include "mixrate/sampling.hpp"

using namespace mixrate;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("AC%-2d %s  %s: %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// The shared trial population: 1000 ensembles, dims 2-8, 2-5 members.
ExperimentConfig population() {
  ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.dim_max = 8;
  cfg.n_states = 2;
  cfg.n_states_max = 5;
  cfg.n_trials = 1000;
  cfg.seed = 20240601;
  return cfg;
}

struct RunResult {
  int status;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

RunResult run(const std::string& cmd, const fs::path& scratch) {
  const fs::path out = scratch / "stdout", err = scratch / "stderr";
  const std::string full = "env -u MIXRATE_WORKERS " + cmd + " >" + quote(out.string()) + " 2>" +
                           quote(err.string());
  const int raw = std::system(full.c_str());
  const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return {status, slurp(out), slurp(err)};
}

std::string strip_elapsed(const std::string& csv) {
  std::stringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

// --------------------------------------------------------------------------

Outcome ac1() {
  const ExperimentConfig cfg = population();
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t id = 0; id < cfg.n_trials; ++id) {
    const TrialSample s = draw_trial(cfg, id);
    const double a = mixing_rate(s.ensemble, s.hamiltonians);
    worst = std::max(worst, std::abs(a - fd_mixing_rate(s.ensemble, s.hamiltonians, 1e-4)));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-6 && secs < 60.0,
          "max |analytic - fd| " + fmt("%.3g", worst) + " over 1000 trials, serial " +
              fmt("%.1f", secs) + "s"};
}

Outcome ac2() {
  const ExperimentConfig cfg = population();
  double worst_gap = 0.0, worst_excess = -INFINITY;
  for (std::uint64_t id = 0; id < cfg.n_trials; ++id) {
    const TrialSample s = draw_trial(cfg, id);
    const double mx = max_mixing_rate(s.ensemble);
    worst_gap = std::max(worst_gap, std::abs(mixing_rate(s.ensemble, optimal_hamiltonians(s.ensemble)) - mx));
    Rng rng(cfg.seed ^ 0xac2, id);
    for (int k = 0; k < 100; ++k) {
      const HamiltonianSet h = sample_hamiltonian_set(s.ensemble.dim(), s.ensemble.size(), rng);
      worst_excess = std::max(worst_excess, std::abs(mixing_rate(s.ensemble, h)) - mx);
    }
  }
  return {worst_gap <= 1e-8 && worst_excess <= 1e-8,
          "max |rate(H*) - max| " + fmt("%.3g", worst_gap) + ", max random excess " +
              fmt("%.3g", worst_excess)};
}

Outcome ac3() {
  ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.dim_max = 8;
  cfg.n_trials = 100;
  cfg.seed = 20240602;
  const auto grid = parse_p_grid("0.01:0.99:0.01");
  const auto start = std::chrono::steady_clock::now();
  const auto recs = scan_binary(grid, cfg, 1);
  const double secs = seconds_since(start);
  double worst = 0.0;
  std::size_t errors = 0;
  for (const auto& r : recs) {
    if (r.error || !r.ratio_thm) ++errors;
    worst = std::max(worst, r.ratio_thm.value_or(INFINITY));
  }
  const bool half = bound_theorem_binary(0.5) == 2.0;
  return {grid.size() == 99 && recs.size() == 9900 && errors == 0 && worst <= 1.0 + 1e-8 && half &&
              secs < 300.0,
          "9900 binary trials, max binary/4sqrt(p(1-p)) " + fmt("%.6f", worst) +
              ", bound(1/2) == 2: " + (half ? "yes" : "no") + ", " + fmt("%.1f", secs) + "s"};
}

Outcome ac4() {
  const ExperimentConfig cfg = population();
  double worst = -INFINITY;
  for (std::uint64_t id = 0; id < cfg.n_trials; ++id) {
    const Ensemble e = draw_trial(cfg, id).ensemble;
    worst = std::max(worst, max_mixing_rate(e) - bound_theorem_general(e.probabilities()));
  }
  const double uniform[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const double u3 = bound_theorem_general(uniform);
  const bool u3_ok = std::abs(u3 - 16.0 / 3.0) <= 1e-12;
  return {worst <= 1e-8 && u3_ok, "max (rate - bound) " + fmt("%.4f", worst) +
                                      ", uniform-3 bound " + fmt("%.15g", u3)};
}

Outcome ac5() {
  const ExperimentConfig cfg = population();
  std::size_t bad = 0;
  double worst = -INFINITY;
  for (std::uint64_t id = 0; id < cfg.n_trials; ++id) {
    const TrialSample s = draw_trial(cfg, id);
    for (const auto& pt : stm_check(s.ensemble, s.hamiltonians, kStmTimes)) {
      if (!pt.ok) ++bad;
      worst = std::max({worst, pt.lower - pt.entropy, pt.entropy - pt.upper});
    }
  }
  return {bad == 0, std::to_string(bad) + " violations in 3000 checks, worst margin " + fmt("%.3g", worst)};
}

struct SieSample {
  PureState psi;
  BipartiteOperator h;
};

std::vector<SieSample> sie_samples() {
  std::vector<SieSample> out;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng(20240606, k);
    const std::size_t dB = 2 + rng.below(2);
    const std::size_t dA = dB + rng.below(4 - dB + 1);
    PureState psi = sample_pure_state({2, dA, dB, 2}, rng);
    out.push_back({std::move(psi), sample_bipartite_operator(dA, dB, rng)});
  }
  return out;
}

Outcome ac6() {
  double worst = 0.0;
  std::size_t invalid_mu = 0;
  for (const auto& s : sie_samples()) {
    try {
      bravyi_mu(s.psi);
    } catch (const Error&) {
      ++invalid_mu;
    }
    worst = std::max(worst, sie_to_sim(s.psi, s.h).identity_residual);
  }
  return {worst <= 1e-8 && invalid_mu == 0,
          "max |Lambda - Gamma/d_B^2| " + fmt("%.3g", worst) + ", " + std::to_string(invalid_mu) +
              " invalid mu"};
}

Outcome ac7() {
  std::vector<double> grid;
  for (int k = 0; k <= 100; ++k) grid.push_back(0.05 * k);
  std::size_t bad = 0;
  double max_gain = 0.0;
  for (const auto& s : sie_samples()) {
    for (const auto& pt : ste_check(s.psi, s.h, grid)) {
      if (!pt.ok) ++bad;
      const double d = double(std::min(s.h.dim_A(), s.h.dim_B()));
      max_gain = std::max(max_gain, (pt.entropy - (pt.bound - 2.0 * std::log(d))) / (2.0 * std::log(d)));
    }
  }
  return {bad == 0, std::to_string(bad) + " violations over 100 samples x 101 times, max gain " +
                        fmt("%.3f", max_gain) + " of 2 ln d"};
}

Outcome ac8() {
  double worst_lhs = 0.0, worst_rhs = 0.0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    Rng rng(20240608, k);
    const Ensemble e = sample_ensemble(2 + rng.below(7), 2, rng);
    const double p = e.probability(0);
    const AkGap g = ak_gap(e.state(0).matrix() * Complex(p), e.state(1).matrix() * Complex(1.0 - p));
    worst_lhs = std::max(worst_lhs, std::abs(g.lhs - binary_max_rate(e)));
    worst_rhs = std::max(worst_rhs, std::abs(g.rhs_unit - binary_entropy(p)));
  }
  return {worst_lhs <= 1e-9 && worst_rhs <= 1e-9,
          "max |lhs - binary rate| " + fmt("%.3g", worst_lhs) + ", max |rhs - S(p)| " +
              fmt("%.3g", worst_rhs)};
}

Outcome ac9() {
  double worst = 0.0;
  std::string detail;
  for (double x : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const double err = std::abs(log_integral_check(x, 1e6, 1000000) - std::log(x));
    worst = std::max(worst, err);
    detail += (detail.empty() ? "" : ", ") + fmt("x=%g", x) + " " + fmt("%.2g", err);
  }
  return {worst <= 1e-4, "errors " + detail};
}

Outcome ac10(const std::string& exe, const fs::path& data, const fs::path& scratch) {
  std::string detail;
  bool ok = true;

  // verify: exit 3 exactly when some record exceeds 1 + 1e-6, and each
  // serialized ensemble reproduces its flagged ratio.
  const fs::path csv = scratch / "ac10.csv", flagged = scratch / "ac10_flagged.json";
  const RunResult v = run(exe + " verify --dim 2 --dim-max 8 --states 2 --states-max 5 --trials 1000 --seed 7 --out " +
                              quote(csv.string()) + " --flagged " + quote(flagged.string()),
                          scratch);
  const auto recs = parse_csv(slurp(csv));
  std::size_t n_flag = 0;
  double max_conj = 0.0;
  for (const auto& r : recs) {
    n_flag += conjecture_flagged(r);
    max_conj = std::max(max_conj, r.ratio_conj.value_or(0.0));
  }
  ok = ok && v.status == (n_flag ? 3 : 0) && v.err.find("max ratio_conj") != std::string::npos;
  if (n_flag) {
    const auto doc = nlohmann::json::parse(slurp(flagged));
    ok = ok && doc.size() == n_flag;
    for (const auto& entry : doc) {
      const Ensemble e = parse_ensemble(entry.at("ensemble").dump());
      const double ratio = max_mixing_rate(e) / shannon_entropy(e.probabilities());
      ok = ok && ratio > 1.0 + 1e-6 &&
           std::abs(ratio - entry.at("ratio_conj").get<double>()) <= 1e-9 * ratio;
    }
  }
  detail += "verify exit " + std::to_string(v.status) + " with " + std::to_string(n_flag) +
            " flagged, max S(X) ratio " + fmt("%.4f", max_conj);

  // scan: binary ratio monitored, and the exit status follows it
  const RunResult s = run(exe + " scan --p-grid 0.05:0.95:0.05 --dim 2 --dim-max 4 --trials 50 --seed 7", scratch);
  double max_bin = 0.0;
  std::size_t scan_flag = 0;
  for (const auto& r : parse_csv(s.out)) {
    max_bin = std::max(max_bin, r.ratio_conj.value_or(0.0));
    scan_flag += conjecture_flagged(r);
  }
  ok = ok && s.status == (scan_flag ? 3 : 0) && s.err.find("max_ratio_conj") != std::string::npos;
  detail += "; scan exit " + std::to_string(s.status) + ", max S(p) ratio " + fmt("%.4f", max_bin);

  // compute on the qubit pair: a known exceedance under the all-members normalization
  const RunResult c = run(exe + " compute --ensemble " + quote((data / "qubit_pair.json").string()), scratch);
  ok = ok && c.status == 3 && c.err.find("\"probabilities\"") != std::string::npos;
  detail += "; compute exit " + std::to_string(c.status);

  // search: the binary objective from the qubit pair
  const RunResult h = run(exe + " search --dim 2 --binary --p 0.5 --iters 10000 --seed 3 --init " +
                              quote((data / "qubit_pair.json").string()),
                          scratch);
  const auto sdoc = nlohmann::json::parse(h.out);
  const double best = sdoc.at("objective").get<double>();
  ok = ok && h.status == (best > 1.0 + 1e-6 ? 3 : 0);
  detail += "; binary search best " + fmt("%.4f", best) + " exit " + std::to_string(h.status);
  return {ok, detail};
}

Outcome ac11(const std::string& exe, const fs::path& scratch) {
  const std::string base = exe + " verify --dim 2 --dim-max 8 --states 2 --states-max 5 --trials 1000 --seed 42";
  const RunResult a = run(base + " --workers 1", scratch);
  const RunResult b = run(base + " --workers 1", scratch);
  const RunResult c = run(base + " --workers 8", scratch);
  const bool repeat = !a.out.empty() && strip_elapsed(a.out) == strip_elapsed(b.out);
  const bool parallel = strip_elapsed(a.out) == strip_elapsed(c.out);

  // the environment override must not change the records either
  const std::string env_cmd = "MIXRATE_WORKERS=3 " + base + " >" + quote((scratch / "env.csv").string()) + " 2>/dev/null";
  const int env_raw = std::system(env_cmd.c_str());
  const bool env = WIFEXITED(env_raw) && strip_elapsed(slurp(scratch / "env.csv")) == strip_elapsed(a.out);
  return {repeat && parallel && env,
          std::string("repeat identical: ") + (repeat ? "yes" : "no") +
              ", 1 vs 8 workers identical: " + (parallel ? "yes" : "no") +
              ", MIXRATE_WORKERS=3 identical: " + (env ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <mixrate> <data-dir>\n", argv[0]);
    return 2;
  }
  const std::string exe = quote(argv[1]);
  const fs::path data = argv[2];
  const fs::path scratch = fs::temp_directory_path() / ("mixrate_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(scratch);

  report(1, "gradient agreement", ac1);
  report(2, "maximizer exactness", ac2);
  report(3, "binary bound over the p-grid", ac3);
  report(4, "general bound", ac4);
  report(5, "small total mixing", ac5);
  report(6, "entangling-to-mixing reduction", ac6);
  report(7, "small total entangling", ac7);
  report(8, "commutator-estimate consistency", ac8);
  report(9, "logarithm integral", ac9);
  report(10, "conjecture monitoring", [&] { return ac10(exe, data, scratch); });
  report(11, "determinism and parallel soundness", [&] { return ac11(exe, scratch); });

  fs::remove_all(scratch);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
