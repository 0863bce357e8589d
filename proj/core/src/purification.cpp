#include "xypurify/purification.hpp"

#include <cmath>
#include <numbers>

#include "xypurify/errors.hpp"
#include "xypurify/xy_dynamics.hpp"

namespace xypurify {

namespace {

void require_fidelity(double f, const char* name) {
  if (!(f >= 0.0 && f <= 1.0)) {
    fail(ErrorKind::domain, std::string(name) + " must lie in [0, 1], got " + std::to_string(f));
  }
}

std::string outcome_string(unsigned bits) {
  std::string s(kMeasuredSlots.size(), '0');
  for (std::size_t k = 0; k < s.size(); ++k) {
    if ((bits >> (s.size() - 1 - k)) & 1U) s[k] = '1';
  }
  return s;
}

double period(double J) { return std::numbers::pi / std::abs(J); }

}  // namespace

DensityMatrix initial_composite_state(double f, const DensityMatrix& stationary) {
  require_fidelity(f, "conveyed-pair fidelity");
  if (stationary.dim() != 4) fail(ErrorKind::shape, "stationary state must be a two-qubit state");
  const DensityMatrix stored = stationary.relabeled({kStationaryPair.first, kStationaryPair.second});
  const DensityMatrix product = tensor(tensor(werner(f, {1, 4}), werner(f, {2, 5})), stored);
  return product.permuted(kCompositeSlots);
}

DensityMatrix evolved_composite_state(double f, const DensityMatrix& stationary, double t0, double J) {
  const DensityMatrix initial = initial_composite_state(f, stationary);
  return apply(evolve_composite(build_xy(J), t0), initial);
}

RoundResult run_round(const RoundInput& input, const RoundOptions& options) {
  for (const auto& outcome : options.accepted) {
    if (outcome.size() != kMeasuredSlots.size() || outcome.find_first_not_of("01") != std::string::npos) {
      fail(ErrorKind::domain, "accepted outcome '" + outcome + "' is not a 4-bit string");
    }
  }
  const DensityMatrix evolved = evolved_composite_state(input.f, input.stationary_state, input.t0, input.J);

  std::map<std::string, double> probabilities;
  Matrix accepted_block = Matrix::Zero(4, 4);
  double accepted_weight = 0.0;
  double first_accepted_weight = -1.0;
  const unsigned outcomes = 1U << kMeasuredSlots.size();
  for (unsigned bits = 0; bits < outcomes; ++bits) {
    std::array<int, 4> b{};
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = static_cast<int>((bits >> (b.size() - 1 - k)) & 1U);
    const ConditionalBlock block =
        project_computational(evolved.matrix(), evolved.labels(), kMeasuredSlots, b);
    const std::string key = outcome_string(bits);
    probabilities[key] = block.probability;
    if (options.accepted.contains(key)) {
      accepted_block += block.block;
      accepted_weight += block.probability;
      if (first_accepted_weight < 0.0) first_accepted_weight = block.probability;
    }
  }
  if (!(accepted_weight >= options.min_probability)) {
    fail(ErrorKind::zero_probability,
         "accepted outcomes have probability " + std::to_string(accepted_weight) + "; post-selected state undefined");
  }

  Matrix post = accepted_block / accepted_weight;
  post = 0.5 * (post + post.adjoint());
  DensityMatrix post_state(std::move(post), {kStationaryPair.first, kStationaryPair.second});
  const double deviation = bell_decompose(post_state).off_diagonal_norm;
  return RoundResult{
      .post_state = std::move(post_state),
      .success_probability = accepted_weight,
      .outcome_probability = first_accepted_weight,
      .accepted_outcomes = options.accepted,
      .outcome_probabilities = std::move(probabilities),
      .werner_deviation = deviation,
  };
}

double closed_form_fidelity(double t0, double f, double J) {
  require_fidelity(f, "f");
  const double c6 = std::cos(6.0 * J * t0);
  const double c12 = std::cos(12.0 * J * t0);
  const double f2 = f * f;
  const double num = f - 38.0 * f2 - 8.0 + 8.0 * (1.0 - 5.0 * f + 4.0 * f2) * c6 - 12.0 * f * (4.0 * f - 1.0) * c12;
  const double den =
      34.0 * f - 32.0 * f2 - 47.0 + 16.0 * (1.0 - 5.0 * f + 4.0 * f2) * c6 - 4.0 * (2.0 * f + 8.0 * f2 - 1.0) * c12;
  if (std::abs(den) < 1e-12) {
    fail(ErrorKind::singular_expression, "closed-form fidelity denominator vanishes at f=" + std::to_string(f));
  }
  return num / den;
}

double closed_form_outcome_probability(double t0, double f, double J) {
  require_fidelity(f, "f");
  const double c6 = std::cos(6.0 * J * t0);
  const double c12 = std::cos(12.0 * J * t0);
  const double f2 = f * f;
  return (1.0 + 2.0 * f) *
         (47.0 - 34.0 * f + 32.0 * f2 - 16.0 * (1.0 - 5.0 * f + 4.0 * f2) * c6 + 4.0 * (2.0 * f + 8.0 * f2 - 1.0) * c12) /
         972.0;
}

ClosedFormRound closed_form_general(double f, double f_prime) {
  require_fidelity(f, "f");
  require_fidelity(f_prime, "f'");
  const double f2 = f * f;
  const double denominator = 59.0 + (12.0 - 64.0 * f_prime) * f - 4.0 * (5.0 - 64.0 * f_prime) * f2;
  const double numerator = f_prime * (12.0 * f + 236.0 * f2 - 5.0) - 16.0 * (f - 1.0);
  // denominator == 972 P, strictly positive on [0,1]^2 (minimum 23 at f=1, f'=0).
  return {numerator / denominator, denominator / 972.0};
}

OperationalTime operational_time(double J, int n) {
  if (J == 0.0) fail(ErrorKind::degenerate_coupling, "operational time needs J != 0");
  if (n < 0) fail(ErrorKind::domain, "operational-time index n must be non-negative");
  return {n, std::numbers::pi * (n + 0.5) / (3.0 * std::abs(J))};
}

int minimal_restoration_periods(double elapsed, double J) {
  if (J == 0.0) fail(ErrorKind::degenerate_coupling, "restoration needs J != 0");
  if (elapsed < 0.0) fail(ErrorKind::negative_duration, "elapsed time must be non-negative");
  return std::max(1, static_cast<int>(std::ceil(elapsed / period(J) - 1e-12)));
}

DensityMatrix restore(const DensityMatrix& composite_state, double elapsed, double J, int m) {
  if (J == 0.0) fail(ErrorKind::degenerate_coupling, "restoration needs J != 0");
  if (m < 0) fail(ErrorKind::domain, "period count m must be non-negative");
  if (composite_state.qubits() != kCompositeSlots.size()) {
    fail(ErrorKind::shape, "restoration acts on the six-qubit state");
  }
  const double total = m * period(J);
  double remaining = total - elapsed;
  if (remaining < 0.0) {
    if (remaining < -1e-12 * std::max(1.0, total)) {
      fail(ErrorKind::negative_duration, "m pi/|J| = " + std::to_string(total) + " is shorter than the elapsed time " +
                                             std::to_string(elapsed));
    }
    remaining = 0.0;
  }
  const DensityMatrix ordered = composite_state.permuted(kCompositeSlots);
  return apply(evolve_composite(build_xy(J), remaining), ordered);
}

BellCoefficients bell_coefficients(const DensityMatrix& rho) {
  const BellDecomposition d = bell_decompose(rho);
  return {
      .A = d.weight(Bell::phi_plus),
      .B = 0.5 * (d.weight(Bell::psi_plus) + d.weight(Bell::psi_minus)),
      .C = d.weight(Bell::phi_minus),
      .D = d.coherence(Bell::phi_plus, Bell::phi_minus).real(),
  };
}

BootstrapResult bootstrap_round(double f, double t0, double J) {
  if (f > 1.0 || !(f == f)) fail(ErrorKind::domain, "f must lie in (1/2, 1]");
  if (below_purification_threshold(f)) {
    fail(ErrorKind::below_threshold, "bootstrap needs f > 1/2, got " + std::to_string(f));
  }
  const std::array<int, 2> zeros{0, 0};
  RoundResult round = run_round({f, DensityMatrix::basis_state(zeros, {3, 6}), t0, J});
  const BellCoefficients coefficients = bell_coefficients(round.post_state);
  return {std::move(round), coefficients};
}

}  // namespace xypurify
