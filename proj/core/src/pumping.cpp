#include "xypurify/pumping.hpp"

#include <cmath>
#include <limits>

#include "xypurify/density_matrix.hpp"
#include "xypurify/errors.hpp"
#include "xypurify/purification.hpp"

namespace xypurify {

namespace {

void require_purifiable(double f) {
  if (!(f <= 1.0)) fail(ErrorKind::domain, "fresh-pair fidelity must not exceed 1");
  if (below_purification_threshold(f)) {
    fail(ErrorKind::below_threshold, "fresh-pair fidelity " + std::to_string(f) + " is not above 1/2");
  }
}

double map_gap(double f, double x) { return closed_form_general(f, x).fidelity - x; }

constexpr int kMaxIterations = 1'000'000;

}  // namespace

PumpTrace pump(double f, int n, PumpMode mode, const PumpOptions& options) {
  require_purifiable(f);
  if (n < 1) fail(ErrorKind::domain, "pumping needs at least one round");
  if (!(options.epsilon > 0.0)) fail(ErrorKind::domain, "epsilon must be positive");

  PumpTrace trace;
  trace.f = f;
  trace.rounds.reserve(static_cast<std::size_t>(n));
  const double T = operational_time(options.J).T;

  double previous = f;
  DensityMatrix stored = werner(f, kStationaryPair);
  for (int k = 1; k <= n; ++k) {
    double next = 0.0;
    double p_success = 0.0;
    if (mode == PumpMode::closed_form) {
      const ClosedFormRound r = closed_form_general(f, previous);
      next = r.fidelity;
      p_success = r.success_probability();
    } else {
      RoundResult r = run_round({f, stored, T, options.J});
      stored = std::move(r.post_state);
      next = fidelity(stored, kStationaryPair);
      p_success = r.success_probability;
    }
    const double increment = next - previous;
    trace.rounds.push_back({k, next, increment, p_success});
    if (!trace.saturated_at && increment < options.saturation_threshold) trace.saturated_at = k;
    previous = next;
  }
  trace.fixed_point = fixed_point(f);
  trace.n_optimal = optimal_rounds(f, options.epsilon);
  return trace;
}

double fixed_point(double f) {
  if (!(f <= 1.0)) fail(ErrorKind::domain, "fresh-pair fidelity must not exceed 1");
  if (f < 0.5) fail(ErrorKind::below_threshold, "no fixed point in [1/2, 1] for f < 1/2");

  double lo = 0.5;
  double hi = 1.0;
  const double g_lo = map_gap(f, lo);
  const double g_hi = map_gap(f, hi);
  if (std::abs(g_hi) <= 1e-15) return hi;
  if (std::abs(g_lo) <= 1e-15) return lo;
  if (g_lo < 0.0 || g_hi > 0.0) {
    fail(ErrorKind::analysis, "pump map has no sign change on [1/2, 1] for f=" + std::to_string(f));
  }
  // F(T, f, ·) − id is positive below the fixed point and negative above it.
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (map_gap(f, mid) > 0.0 ? lo : hi) = mid;
  }
  const double x = 0.5 * (lo + hi);
  if (std::abs(map_gap(f, x)) > 1e-12) {
    fail(ErrorKind::analysis, "bisection did not converge for f=" + std::to_string(f));
  }
  return x;
}

int optimal_rounds(double f, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorKind::domain, "epsilon must be positive");
  const double target = fixed_point(f);
  double current = f;
  for (int n = 0; n <= kMaxIterations; ++n) {
    if (target - current < epsilon) return n;
    current = closed_form_general(f, current).fidelity;
  }
  fail(ErrorKind::analysis, "pumping did not approach the fixed point within the iteration limit");
}

std::vector<Figure6Row> figure6_data(std::span<const double> f_grid, int n_max) {
  if (n_max < 1) fail(ErrorKind::domain, "n_max must be at least 1");
  std::vector<Figure6Row> rows;
  rows.reserve(f_grid.size() * static_cast<std::size_t>(n_max));
  for (double f : f_grid) {
    require_purifiable(f);
    double previous = f;
    for (int n = 1; n <= n_max; ++n) {
      const double next = closed_form_general(f, previous).fidelity;
      rows.push_back({f, n, next - f, next - previous, next});
      previous = next;
    }
  }
  return rows;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) fail(ErrorKind::domain, "grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
  grid.back() = hi;
  return grid;
}

}  // namespace xypurify
