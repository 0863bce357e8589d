// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and runtime
// limits are fixed here; the process exits non-zero if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "xypurify/cavity.hpp"
#include "xypurify/cnot_baseline.hpp"
#include "xypurify/errors.hpp"
#include "xypurify/montecarlo.hpp"
#include "xypurify/pumping.hpp"
#include "xypurify/purification.hpp"
#include "xypurify/xy_dynamics.hpp"

namespace xp = xypurify;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Verdict()> check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Peak fidelity at t0 = T with f = f' = 0.75.
Verdict peak_fidelity() {
  const double T = xp::operational_time(1.0).T;
  const xp::RoundResult r = xp::run_round({0.75, xp::werner(0.75, xp::kStationaryPair), T, 1.0});
  const double F = xp::fidelity(r.post_state, xp::kStationaryPair);
  return {F >= 0.8272 && F <= 0.8282, fmt("F=%.10f in [0.8272, 0.8282]", F)};
}

// 2. Brute-force six-qubit oracle vs both closed forms.
Verdict oracle_equivalence() {
  double worst_time = 0.0;
  for (double f : xp::linspace(0.5, 1.0, 9)) {
    for (double jt : xp::linspace(0.0, pi / 3.0, 13)) {
      const oracle::RoundOutcome o = oracle::round(oracle::werner(f), oracle::werner(f), 1.0, jt);
      worst_time = std::max(worst_time, std::abs(o.fidelity - xp::closed_form_fidelity(jt, f, 1.0)));
    }
  }
  double worst_general = 0.0;
  const double T = pi / 6.0;
  for (double f : xp::linspace(0.0, 1.0, 11)) {
    for (double fp : xp::linspace(0.0, 1.0, 11)) {
      const oracle::RoundOutcome o = oracle::round(oracle::werner(f), oracle::werner(fp), 1.0, T);
      const xp::ClosedFormRound c = xp::closed_form_general(f, fp);
      worst_general = std::max({worst_general, std::abs(o.fidelity - c.fidelity),
                                std::abs(o.outcome_probability - c.outcome_probability)});
    }
  }
  return {worst_time < 1e-9 && worst_general < 1e-9,
          fmt("max|dF| 9x13 (f,Jt0)=%.2e, 11x11 (f,f')=%.2e, tol 1e-9", worst_time, worst_general)};
}

// 3. Simulated bilateral-CNOT round vs its formula.
Verdict cnot_baseline() {
  double worst = 0.0;
  for (double f : xp::linspace(0.0, 1.0, 21)) {
    const xp::CnotRoundResult r = xp::cnot_round(xp::werner(f, {1, 4}), xp::werner(f, {2, 5}));
    worst = std::max(worst, std::abs(r.fidelity - oracle::cnot_formula(f)));
  }
  const double at75 = xp::cnot_round(xp::werner(0.75, {1, 4}), xp::werner(0.75, {2, 5})).fidelity;
  const double at50 = xp::cnot_round(xp::werner(0.5, {1, 4}), xp::werner(0.5, {2, 5})).fidelity;
  // The formula evaluates to 5.125/6.5 at f = 0.75.
  const bool fixed = std::abs(at75 - 5.125 / 6.5) < 1e-12 && std::abs(at50 - 0.5) < 1e-12;
  return {worst < 1e-12 && fixed,
          fmt("max|dF| over 21 points=%.2e; F(0.75)=%.12f (5.125/6.5); F(0.5)=%.12f", worst, at75, at50)};
}

// 4. Werner inputs produce a Bell-diagonal Werner output.
Verdict werner_preservation() {
  double worst = 0.0;
  for (double f : xp::linspace(0.05, 1.0, 20)) {
    for (double jt : xp::linspace(0.0, pi, 25)) {
      for (double fp : {f, 0.3, 0.9}) {
        try {
          const xp::RoundResult r = xp::run_round({f, xp::werner(fp, xp::kStationaryPair), jt, 1.0});
          worst = std::max(worst, r.werner_deviation);
        } catch (const xp::Error&) {
          // Zero-probability points have no post-selected state.
        }
      }
    }
  }
  return {worst < 1e-10, fmt("max Bell off-diagonal=%.2e < 1e-10", worst)};
}

// 5. Restoration after a random elapsed time.
Verdict restoration() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_bell = [&] {
    std::array<double, 4> w{};
    double s = 0.0;
    for (double& x : w) s += (x = u(rng));
    for (double& x : w) x /= s;
    return w;
  };
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double J = (k % 2 == 0 ? 1.0 : -1.0) * (0.5 + u(rng));
    const xp::DensityMatrix initial =
        xp::tensor(xp::tensor(xp::bell_diagonal(random_bell(), {1, 4}), xp::bell_diagonal(random_bell(), {2, 5})),
                   xp::bell_diagonal(random_bell(), {3, 6}))
            .permuted(xp::kCompositeSlots);
    const int m = 1 + k % 3;
    const double elapsed = u(rng) * m * pi / std::abs(J);
    const xp::DensityMatrix evolved = xp::apply(xp::evolve_composite(xp::build_xy(J), elapsed), initial);
    worst = std::max(worst, xp::trace_distance(xp::restore(evolved, elapsed, J, m), initial));
  }
  return {worst < 1e-10, fmt("max trace distance over 100 inputs=%.2e < 1e-10", worst)};
}

// 6. Saturation structure of the per-round increment.
Verdict saturation() {
  const std::vector<double> grid = xp::linspace(0.55, 0.95, 9);
  const std::vector<xp::Figure6Row> rows = xp::figure6_data(grid, 10);
  auto argmax = [&](int n) {
    double best_f = 0.0, best = -1.0;
    for (const auto& r : rows) {
      if (r.n == n && r.increment > best) {
        best = r.increment;
        best_f = r.f;
      }
    }
    return best_f;
  };
  double late = 0.0;
  for (const auto& r : rows) {
    if (r.n >= 6) late = std::max(late, r.increment);
  }
  const double a1 = argmax(1);
  const double a2 = argmax(2);
  const bool ok1 = std::abs(a1 - 0.75) < 1e-9;
  const bool ok2 = std::abs(a2 - 0.75) < 1e-9;
  return {ok1 && ok2 && late < 0.005,
          fmt("argmax_f Fbar(f,1)=%.2f [%s], argmax_f Fbar(f,2)=%.2f [%s], max Fbar(f,n>=6)=%.2e < 0.005 [%s]", a1,
              ok1 ? "ok" : "miss", a2, ok2 ? "ok" : "miss", late, late < 0.005 ? "ok" : "miss")};
}

// 7. XY gate vs CNOT gate.
Verdict comparison() {
  std::vector<double> grid;
  for (double f : xp::linspace(0.5, 1.0, 11)) {
    if (f > 0.5 && f < 1.0) grid.push_back(f);
  }
  bool beats = true;
  double min_margin = 1.0;
  double max_gap = 0.0;
  for (const auto& r : xp::compare_figure5b(grid)) {
    const double margin = r.xy_fidelity - oracle::cnot_formula(r.f);
    beats = beats && margin > 0.0;
    min_margin = std::min(min_margin, margin);
    max_gap = std::max(max_gap, std::abs(r.scheme_c_two_rounds - r.xy_fidelity));
  }
  return {beats && max_gap <= 0.03,
          fmt("min(F_xy - F_cnot)=%.4f > 0 on %zu points; max|F_C2 - F_xy|=%.4f <= 0.03", min_margin, grid.size(),
              max_gap)};
}

// 8. Bootstrap from |00>.
Verdict bootstrap() {
  const double f = 0.75;
  const double T = xp::operational_time(1.0).T;
  const xp::BootstrapResult first = xp::bootstrap_round(f, T, 1.0);
  const double A = first.coefficients.A;
  std::vector<double> coherence{std::abs(xp::bell_decompose(first.round.post_state).coherence(xp::Bell::phi_plus, xp::Bell::phi_minus))};
  xp::DensityMatrix stored = first.round.post_state;
  for (int k = 2; k <= 6; ++k) {
    xp::RoundResult r = xp::run_round({f, stored, T, 1.0});
    stored = std::move(r.post_state);
    coherence.push_back(std::abs(xp::bell_decompose(stored).coherence(xp::Bell::phi_plus, xp::Bell::phi_minus)));
  }
  bool monotone = true;
  for (std::size_t k = 1; k < coherence.size(); ++k) monotone = monotone && coherence[k] < coherence[k - 1];
  int below = 0;
  for (std::size_t k = 0; k < coherence.size(); ++k) {
    if (coherence[k] < 1e-3) {
      below = static_cast<int>(k + 1);
      break;
    }
  }
  std::ostringstream trace;
  for (double c : coherence) trace << fmt(" %.1e", c);
  return {std::abs(A - f) <= 0.02 && monotone && below > 0,
          fmt("A=%.4f (|A-f|<=0.02); |D| by round:%s; monotone=%s; <1e-3 at round %d", A, trace.str().c_str(),
              monotone ? "yes" : "no", below)};
}

// 9. Microscopic cavity model vs mean Hamiltonian.
Verdict microscopic() {
  const double d = xp::solve_geometry(1.0, 1.0);
  const xp::CavityGeometry geom = xp::CavityGeometry::centered(1.0, 1.0, 1.0, d, 1.0, 50.0);
  const xp::AgreementReport r = xp::xy_agreement(geom);
  const std::vector<xp::ConvergencePoint> study = xp::convergence_study(geom, 1);
  const double ratio = study[0].distance / study[1].distance;
  const bool halves = std::abs(ratio - 2.0) <= 0.2 * 2.0;
  return {r.full_vs_mean < 0.05 && r.max_leakage < r.leakage_bound && halves,
          fmt("|psi_JC - psi_M|=%.4f < 0.05; max|c0|^2=%.2e < %.2e; d(50)/d(100)=%.3f (order %.3f), 2 +/- 20%%",
              r.full_vs_mean, r.max_leakage, r.leakage_bound, ratio, study[1].order)};
}

// 10. Monte Carlo consistency and determinism.
Verdict montecarlo() {
  xp::ProtocolConfig c;
  c.f = 0.75;
  c.target_rounds = 4;
  c.seed = 0x5eed;
  const long trials = 100'000;
  const auto serial = xp::run_trials(c, trials, 1);
  const auto parallel = xp::run_trials(c, trials, 4);
  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i].rounds_attempted == parallel[i].rounds_attempted &&
                serial[i].total_time == parallel[i].total_time &&
                serial[i].attempts_per_round == parallel[i].attempts_per_round;
  }
  const xp::MonteCarloSummary s = xp::summarize(c, serial);

  double expected = 0.0;
  double x = c.f;
  std::vector<double> p;
  for (int k = 0; k < 4; ++k) {
    p.push_back(2.0 * oracle::reference_outcome_probability(c.f, x));
    expected += 1.0 / p.back();
    x = oracle::reference_fidelity(c.f, x);
  }
  const double rel = std::abs(s.mean_attempts / expected - 1.0);
  double worst_z = 0.0;
  for (std::size_t k = 0; k < s.round_rates.size(); ++k) {
    const auto& r = s.round_rates[k];
    const double sigma = std::sqrt(p[k] * (1.0 - p[k]) / static_cast<double>(r.attempts));
    worst_z = std::max(worst_z, std::abs(r.empirical - p[k]) / sigma);
  }
  return {rel <= 0.02 && worst_z <= 3.0 && identical && s.round_rates.size() == 4,
          fmt("mean attempts=%.4f vs analytic %.4f (rel %.2e <= 0.02); max per-round |z|=%.2f <= 3; 1 vs 4 workers "
              "identical=%s",
              s.mean_attempts, expected, rel, worst_z, identical ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "peak fidelity", 1.0, peak_fidelity},
      {2, "oracle equivalence", 30.0, oracle_equivalence},
      {3, "CNOT baseline", 5.0, cnot_baseline},
      {4, "Werner preservation", 10.0, werner_preservation},
      {5, "restoration", 30.0, restoration},
      {6, "saturation structure", 5.0, saturation},
      {7, "comparison claims", 10.0, comparison},
      {8, "bootstrap", 10.0, bootstrap},
      {9, "microscopic validation", 60.0, microscopic},
      {10, "Monte Carlo consistency", 60.0, montecarlo},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.time_limit_s;
    const bool pass = v.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] %2d %-24s %s; %.2fs < %.0fs%s\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), elapsed,
                c.time_limit_s, in_time ? "" : " (over time limit)");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
