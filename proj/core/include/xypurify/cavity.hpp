#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "xypurify/density_matrix.hpp"

namespace xypurify {

/// Conveyor-belt cavity setup. Units are dimensionless: ħ = 1, times in 1/g0
/// when g0 = 1, lengths in units of the waist when w = 1.
struct CavityGeometry {
  double g0 = 1.0;      ///< vacuum Rabi frequency
  double w = 1.0;       ///< cavity waist
  double ell = 1.0;     ///< stationary-atom offset
  double d = 0.0;       ///< spacing inside the conveyed pair
  double v = 1.0;       ///< conveyor velocity
  double delta = 50.0;  ///< detuning (ω_E − ω₀) − ω
  /// Positions of the conveyed atoms at t = 0; |z0[0] − z0[1]| must equal d.
  std::array<double, 2> z0{0.0, 0.0};
  /// Bare frequencies. Only their combination in `delta` enters the dynamics.
  double omega = 0.0;
  double omega0 = 0.0;
  double omegaE = 0.0;
  /// Minimum |Δ|/g0 for the adiabatic flag.
  double adiabatic_ratio_min = 20.0;

  /// Pair centred on the cavity axis at t = 0.
  static CavityGeometry centered(double g0, double w, double ell, double d, double v, double delta);

  /// Throws a geometry error for non-positive g0, w, v, zero Δ or
  /// inconsistent initial positions.
  void validate() const;
  bool adiabatic() const;
  /// g = g0 exp(−ℓ²/2w²).
  double mean_coupling() const;
  /// t' = √π w / v.
  double interaction_time() const;
  /// C₁₂ = exp[(2ℓ² − d²)/(2w²)] / √2.
  double c12() const;
};

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;
};

/// Window over which every conveyed atom sweeps at least z ∈ [−half_width·w, half_width·w].
TimeWindow default_window(const CavityGeometry& geom, double half_width = 5.0);

/// g_i(t) for atom 1, 2 (Gaussian transit) or 3 (stationary).
double coupling(const CavityGeometry& geom, int atom, double t);

/// Amplitudes on {|000;1>, |e00;0>, |0e0;0>, |00e;0>}.
struct AmplitudeState {
  double t = 0.0;
  std::array<Complex, 4> c{};

  double norm_squared() const;
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-3;
  /// Upper bound on the step, as a fraction of the transit time w / v.
  double max_step_fraction = 0.1;
  /// Steps shorter than this fraction of the window signal stiffness.
  double min_step_fraction = 1e-13;
  long max_steps = 20'000'000;
  /// Keep every accepted step when true, otherwise only the endpoints.
  bool record_all = false;
};

struct Trajectory {
  std::vector<AmplitudeState> samples;
  double max_leakage = 0.0;  ///< max |c0|²
  double norm_drift = 0.0;   ///< max |‖c‖² − ‖c(start)‖²|
  long accepted_steps = 0;
  long rejected_steps = 0;

  const AmplitudeState& final_state() const { return samples.back(); }
};

/// Full single-excitation Jaynes–Cummings dynamics:
///   i ċ₀ = −Δ c₀ + i Σ g_k c_k,   ċ_i = −g_i c₀.
Trajectory integrate_full(const CavityGeometry& geom, const AmplitudeState& initial, TimeWindow window,
                          const IntegratorOptions& options = {});

/// Adiabatically eliminated dynamics i ċ_k = Σ_j g_k g_j c_j / Δ. The cavity
/// amplitude is carried as zero.
Trajectory integrate_effective(const CavityGeometry& geom, const AmplitudeState& initial, TimeWindow window,
                               const IntegratorOptions& options = {});

/// Dipole-dipole part only, i ċ_k = Σ_{j≠k} g_k g_j c_j / Δ (Stark terms dropped).
Trajectory integrate_dipole(const CavityGeometry& geom, const AmplitudeState& initial, TimeWindow window,
                            const IntegratorOptions& options = {});

struct AsymptoticHamiltonian {
  /// Single-excitation block: off-diagonal (g0² e^{−ℓ²/w²}/Δ) C_ij.
  Eigen::Matrix3d H_inf = Eigen::Matrix3d::Zero();
  /// Closed-form coupling coefficients (zero diagonal).
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  double t_prime = 0.0;
  /// ∫ g_i g_j dt over the window (off-diagonal).
  Eigen::Matrix3d integrals = Eigen::Matrix3d::Zero();
  /// max |∫g_ig_j dt − g0² e^{−ℓ²/w²} C_ij t'| / (g0² e^{−ℓ²/w²} C_ij t').
  double max_relative_error = 0.0;
  /// Fraction of a conveyed atom's coupling integral outside the window.
  double tail_mass = 0.0;
};

/// Throws a truncation error if the tail mass exceeds 1e-8.
AsymptoticHamiltonian asymptotic_hamiltonian(const CavityGeometry& geom, TimeWindow window);
AsymptoticHamiltonian asymptotic_hamiltonian(const CavityGeometry& geom);

/// d = sqrt(2ℓ² − w² ln 2), the spacing giving C₁₂ = 1.
double solve_geometry(double ell, double w);

/// Smallest stationary offset for which C₁₂ = 1 is reachable: w √(ln2 / 2).
double minimum_feasible_ell(double w);

struct AgreementReport {
  double d = 0.0;
  double t_prime = 0.0;
  double mean_coupling = 0.0;
  /// XY coupling of the matching ring Hamiltonian, J = g²/(2Δ).
  double J = 0.0;
  /// J t'; the purification gate needs π/6.
  double xy_angle = 0.0;
  /// Conveyor velocity at which J t' = π/6.
  double operational_velocity = 0.0;
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  double integral_relative_error = 0.0;

  // Endpoint distances (vector norm on c1..c3), maximised over the three
  // single-excitation initial states.
  double full_vs_effective = 0.0;
  double full_vs_mean = 0.0;
  double effective_vs_mean = 0.0;
  double mean_vs_xy_corrected = 0.0;
  /// Distance the mean-Hamiltonian evolution moves the initial state.
  double mean_displacement = 0.0;
  /// Dipole-only dynamics vs exp(−i H_∞ t'): isolates the commutator
  /// approximation from the dropped Stark terms.
  double dipole_vs_asymptotic = 0.0;
  /// Distance exp(−i H_∞ t') moves the initial state.
  double asymptotic_displacement = 0.0;

  double max_leakage = 0.0;
  double leakage_bound = 0.0;  ///< 4 (g_max/Δ)²
  double norm_drift = 0.0;
  /// max ‖[H̃(t₁), H̃(t₂)]‖ / max ‖H̃(t)‖² over sampled time pairs.
  double commutator_ratio = 0.0;
};

/// Compares the full, eliminated, mean-Hamiltonian and XY-ring endpoints for
/// a geometry solved for C₁₂ = 1 (geometry error otherwise).
AgreementReport xy_agreement(const CavityGeometry& geom, const IntegratorOptions& options = {});

struct ConvergencePoint {
  double delta = 0.0;
  double distance = 0.0;  ///< full vs mean
  /// log2(distance(prev) / distance) between successive doublings; 0 for the first point.
  double order = 0.0;
};

/// Repeats the full-vs-mean comparison at Δ · 2^k, k = 0..doublings, at fixed
/// velocity and geometry.
std::vector<ConvergencePoint> convergence_study(const CavityGeometry& geom, int doublings,
                                                const IntegratorOptions& options = {});

}  // namespace xypurify
