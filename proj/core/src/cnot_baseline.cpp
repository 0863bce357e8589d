#include "xypurify/cnot_baseline.hpp"

#include <cmath>

#include "xypurify/errors.hpp"
#include "xypurify/purification.hpp"

namespace xypurify {

namespace {

// Slot layout: 1_A = 1, 2_A = 2, 1_B = 4, 2_B = 5.
const std::vector<Slot> kGateOrder = {1, 2, 4, 5};

Eigen::Matrix2cd rotation(double sign) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  u << Complex(s, 0), Complex(0, sign * s), Complex(0, sign * s), Complex(s, 0);
  return u;
}

Matrix cnot(int control, int target, int qubits) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  const Eigen::Index cbit = Eigen::Index{1} << (qubits - 1 - control);
  const Eigen::Index tbit = Eigen::Index{1} << (qubits - 1 - target);
  Matrix u = Matrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) u((s & cbit) ? (s ^ tbit) : s, s) = 1.0;
  return u;
}

Matrix purification_gate(RotationAssignment rotations) {
  double sign_a = 1.0, sign_b = -1.0;
  switch (rotations) {
    case RotationAssignment::plus_on_a: break;
    case RotationAssignment::minus_on_a: sign_a = -1.0; sign_b = 1.0; break;
    case RotationAssignment::plus_on_both: sign_b = 1.0; break;
    case RotationAssignment::minus_on_both: sign_a = -1.0; break;
  }
  const Matrix ua = rotation(sign_a);
  const Matrix ub = rotation(sign_b);
  const Matrix local = kron(kron(ua, ua), kron(ub, ub));
  // Controls 1_A, 1_B (positions 0, 2); targets 2_A, 2_B (positions 1, 3).
  return cnot(0, 1, 4) * cnot(2, 3, 4) * local;
}

}  // namespace

CnotRoundResult cnot_round(const DensityMatrix& source, const DensityMatrix& target, RotationAssignment rotations) {
  if (source.dim() != 4 || target.dim() != 4) fail(ErrorKind::shape, "CNOT round needs two-qubit states");
  const DensityMatrix joint =
      tensor(source.relabeled({1, 4}), target.relabeled({2, 5})).permuted(kGateOrder);
  const Matrix u = purification_gate(rotations);
  const Matrix evolved = u * joint.matrix() * u.adjoint();

  Matrix kept = Matrix::Zero(4, 4);
  for (int bit : {0, 1}) {
    const std::array<int, 2> bits{bit, bit};
    kept += project_computational(evolved, kGateOrder, {2, 5}, bits).block;
  }
  const double p = kept.trace().real();
  if (!(p >= 1e-14)) fail(ErrorKind::zero_probability, "CNOT round has no weight on agreeing outcomes");
  Matrix post = kept / p;
  post = 0.5 * (post + post.adjoint());
  DensityMatrix state(std::move(post), source.labels());
  const double fid = fidelity(state, {source.labels()[0], source.labels()[1]});
  return {std::move(state), fid, p};
}

double cnot_fidelity_formula(double f) {
  return (1.0 - 2.0 * f + 10.0 * f * f) / (5.0 - 4.0 * f + 8.0 * f * f);
}

PumpTrace scheme_c_pump(double f, int n, const PumpOptions& options) {
  if (!(f <= 1.0)) fail(ErrorKind::domain, "fresh-pair fidelity must not exceed 1");
  if (below_purification_threshold(f)) fail(ErrorKind::below_threshold, "scheme C needs f > 1/2");
  if (n < 1) fail(ErrorKind::domain, "pumping needs at least one round");

  PumpTrace trace;
  trace.f = f;
  const DensityMatrix fresh = werner(f, {1, 2});
  DensityMatrix stored = fresh;
  double previous = f;
  for (int k = 1; k <= n; ++k) {
    CnotRoundResult r = cnot_round(stored, fresh);
    stored = std::move(r.post_state);
    trace.rounds.push_back({k, r.fidelity, r.fidelity - previous, r.success_probability});
    if (!trace.saturated_at && r.fidelity - previous < options.saturation_threshold) trace.saturated_at = k;
    previous = r.fidelity;
  }

  // The stored state is not a scalar map, so locate the fixed point by iteration.
  DensityMatrix probe = fresh;
  double last = f;
  int steps = 0;
  std::optional<int> reached;
  constexpr int kMaxSteps = 100000;
  std::vector<double> history{f};
  for (; steps < kMaxSteps; ++steps) {
    CnotRoundResult r = cnot_round(probe, fresh);
    probe = std::move(r.post_state);
    history.push_back(r.fidelity);
    if (std::abs(r.fidelity - last) < 1e-14) break;
    last = r.fidelity;
  }
  trace.fixed_point = history.back();
  for (std::size_t k = 0; k < history.size(); ++k) {
    if (trace.fixed_point - history[k] < options.epsilon) {
      reached = static_cast<int>(k);
      break;
    }
  }
  trace.n_optimal = reached.value_or(static_cast<int>(history.size()) - 1);
  return trace;
}

std::vector<Figure5bRow> compare_figure5b(std::span<const double> f_grid) {
  std::vector<Figure5bRow> rows;
  rows.reserve(f_grid.size());
  for (double f : f_grid) {
    if (!(f >= 0.5 && f <= 1.0)) fail(ErrorKind::domain, "comparison grid must lie in [1/2, 1]");
    const DensityMatrix w = werner(f, {1, 2});
    const double one_round = cnot_round(w, w).fidelity;
    const double two_rounds = cnot_round(cnot_round(w, w).post_state, w).fidelity;
    rows.push_back({f, closed_form_general(f, f).fidelity, one_round, two_rounds});
  }
  return rows;
}

}  // namespace xypurify
