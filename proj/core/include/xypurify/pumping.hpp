#pragma once

#include <optional>
#include <span>
#include <vector>

namespace xypurify {

enum class PumpMode { closed_form, simulation };

struct PumpOptions {
  double J = 1.0;
  /// Gap to the fixed point that counts as "reached" for n_optimal.
  double epsilon = 1e-3;
  /// Per-round gain below which pumping is considered saturated.
  double saturation_threshold = 0.005;
};

struct PumpRound {
  int n = 0;
  double fidelity = 0.0;             ///< F_n
  double increment = 0.0;            ///< F̄(f, n) = F_n − F_{n−1}
  double success_probability = 0.0; ///< probability that round n succeeds (both accepted outcomes)
};

struct PumpTrace {
  double f = 0.0;
  /// Rounds 1..n; F_0 = f is implicit.
  std::vector<PumpRound> rounds;
  double fixed_point = 0.0;
  int n_optimal = 0;
  /// First round whose increment is below the saturation threshold.
  std::optional<int> saturated_at;

  double final_fidelity() const { return rounds.empty() ? f : rounds.back().fidelity; }
  /// F̂(f, n) = F_n − f.
  double gain() const { return final_fidelity() - f; }
};

/// Iterates F_k = F(T, f, F_{k−1}) with fresh fidelity-f pairs. In simulation
/// mode the full stationary density matrix is carried between rounds.
PumpTrace pump(double f, int n, PumpMode mode, const PumpOptions& options = {});

/// x* ∈ [1/2, 1] with F(T, f, x*) = x*, by bisection to 1e-12 or better.
double fixed_point(double f);

/// Smallest n with fixed_point(f) − F_n < epsilon.
int optimal_rounds(double f, double epsilon);

struct Figure6Row {
  double f = 0.0;
  int n = 0;
  double gain = 0.0;       ///< F̂(f, n)
  double increment = 0.0;  ///< F̄(f, n)
  double final_fidelity = 0.0;
};

/// Rows for every f in the grid and n = 1..n_max, ordered by f then n.
std::vector<Figure6Row> figure6_data(std::span<const double> f_grid, int n_max);

/// Evenly spaced grid of `points` values on [lo, hi].
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace xypurify
