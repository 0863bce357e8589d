#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "xypurify/density_matrix.hpp"

namespace xypurify {

/// Slots projected at the end of a round, in outcome-string order.
inline const std::vector<Slot> kMeasuredSlots = {1, 2, 4, 5};
/// Stationary (permanent) pair.
inline constexpr SlotPair kStationaryPair = {3, 6};

/// Outcome strings over slots (1,2,4,5) that herald success.
inline const std::set<std::string> kAcceptedOutcomes = {"0101", "1010"};

struct RoundInput {
  double f = 0.0;                   ///< fidelity of both conveyed pairs
  DensityMatrix stationary_state;  ///< any two-qubit state; labels are replaced by (3,6)
  double t0 = 0.0;                  ///< evolution time
  double J = 1.0;
};

struct RoundResult {
  DensityMatrix post_state;
  /// Weight of all accepted outcomes together.
  double success_probability = 0.0;
  /// Weight of a single accepted outcome (the closed-form P). Both accepted
  /// outcomes carry the same weight for Bell-diagonal inputs.
  double outcome_probability = 0.0;
  std::set<std::string> accepted_outcomes;
  std::map<std::string, double> outcome_probabilities;
  double werner_deviation = 0.0;
};

struct RoundOptions {
  std::set<std::string> accepted = kAcceptedOutcomes;
  /// Success weights below this raise a zero-probability error.
  double min_probability = 1e-14;
};

/// One purification round: evolve ρ_f^{1,4} ⊗ ρ_f^{2,5} ⊗ ρ^{3,6} under the
/// composite XY propagator for t0, map back to the storage basis (identity
/// relabeling), project slots (1,2,4,5) and post-select.
RoundResult run_round(const RoundInput& input, const RoundOptions& options = {});

/// Six-qubit state U(t0)(ρ_f ⊗ ρ_f ⊗ ρ_stationary)U†(t0) over kCompositeSlots,
/// before any measurement.
DensityMatrix evolved_composite_state(double f, const DensityMatrix& stationary, double t0, double J);

/// Initial (unevolved) six-qubit state over kCompositeSlots.
DensityMatrix initial_composite_state(double f, const DensityMatrix& stationary);

/// Post-selected fidelity F̃(t0, f) for Werner inputs with f' = f, evaluated
/// from its rational-trigonometric closed form.
double closed_form_fidelity(double t0, double f, double J);
/// Per-outcome weight P̃(t0, f) from the companion closed form.
double closed_form_outcome_probability(double t0, double f, double J);

struct ClosedFormRound {
  double fidelity = 0.0;
  /// Weight of one accepted outcome.
  double outcome_probability = 0.0;
  /// Both accepted outcomes.
  double success_probability() const { return 2.0 * outcome_probability; }
};

/// F(T, f, f') and P(T, f, f') at the operational time.
ClosedFormRound closed_form_general(double f, double f_prime);

struct OperationalTime {
  int n = 0;
  double T = 0.0;
};

/// T = π (n + 1/2) / (3 J).
OperationalTime operational_time(double J, int n = 0);

/// Smallest m ≥ 1 with m π / |J| ≥ elapsed.
int minimal_restoration_periods(double elapsed, double J);

/// Continues the composite evolution for m π/|J| − elapsed so that the total
/// evolution spans m full periods. Returns the six-qubit state.
DensityMatrix restore(const DensityMatrix& composite_state, double elapsed, double J, int m = 1);

struct BellCoefficients {
  double A = 0.0;  ///< Φ⁺ weight
  double B = 0.0;  ///< mean of the Ψ⁺ and Ψ⁻ weights
  double C = 0.0;  ///< Φ⁻ weight
  double D = 0.0;  ///< Φ⁺/Φ⁻ coherence (real part)
};

BellCoefficients bell_coefficients(const DensityMatrix& rho);

struct BootstrapResult {
  RoundResult round;
  BellCoefficients coefficients;
};

/// First round with the stationary pair prepared in |0_3 0_6>.
BootstrapResult bootstrap_round(double f, double t0, double J);

}  // namespace xypurify
