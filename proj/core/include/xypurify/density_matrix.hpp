#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xypurify {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Name of a qubit slot. Node A's triplet uses 1,2,3 and node B's 4,5,6;
/// pairs shared between the nodes are (1,4), (2,5) and (3,6).
using Slot = int;
using SlotPair = std::pair<Slot, Slot>;

struct Tolerance {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double psd = 1e-10;
  double equality = 1e-9;

  /// Throws a domain error unless every field is strictly positive.
  void validate() const;
};

/// Hermitian, unit-trace, positive semidefinite matrix over an ordered list of
/// qubit slots. The first label is the most significant bit of the row index.
class DensityMatrix {
 public:
  /// Validates the quantum-state invariants against `tol` and throws on
  /// failure (shape, label or domain error).
  DensityMatrix(Matrix entries, std::vector<Slot> labels, const Tolerance& tol = {});

  static DensityMatrix pure(const Vector& psi, std::vector<Slot> labels);
  static DensityMatrix maximally_mixed(std::vector<Slot> labels);
  /// |b_1 b_2 ...><b_1 b_2 ...| in the computational basis.
  static DensityMatrix basis_state(std::span<const int> bits, std::vector<Slot> labels);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t qubits() const { return labels_.size(); }
  const Matrix& matrix() const { return entries_; }
  const std::vector<Slot>& labels() const { return labels_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

  /// Position of `slot` in the label list; throws a label error if absent.
  std::size_t position_of(Slot slot) const;
  bool has_slot(Slot slot) const;

  /// Same matrix, new names. The label count must match.
  DensityMatrix relabeled(std::vector<Slot> labels) const;
  /// Reorders the tensor factors so that the label list equals `order`.
  DensityMatrix permuted(const std::vector<Slot>& order) const;

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, Matrix entries, std::vector<Slot> labels)
      : entries_(std::move(entries)), labels_(std::move(labels)) {}

  Matrix entries_;
  std::vector<Slot> labels_;
};

enum class Bell { phi_plus, phi_minus, psi_plus, psi_minus };

inline constexpr std::array<Bell, 4> kBellOrder = {Bell::phi_plus, Bell::phi_minus,
                                                   Bell::psi_plus, Bell::psi_minus};

/// (|00> ± |11>)/√2 and (|01> ± |10>)/√2.
Eigen::Vector4cd bell_vector(Bell which);
Eigen::Matrix4cd bell_projector(Bell which);
/// Columns are the Bell vectors in `kBellOrder`.
Eigen::Matrix4cd bell_basis();

/// f Φ⁺ + (1−f)/3 (Φ⁻ + Ψ⁺ + Ψ⁻) on `pair`. Throws a domain error when f is
/// outside [0, 1].
DensityMatrix werner(double f, SlotPair pair = {1, 2});

/// Werner fidelities at or below 1/2 cannot be purified.
bool below_purification_threshold(double f);

/// Bell-diagonal state with weights on (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).
DensityMatrix bell_diagonal(const std::array<double, 4>& weights, SlotPair pair = {1, 2});

/// Tr[Φ⁺ ρ] for a two-qubit state whose labels are exactly `pair`.
double fidelity(const DensityMatrix& rho, SlotPair pair);

/// a ⊗ b with concatenated labels. Label sets must be disjoint.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state over `keep`, listed in the order they appear in `rho`.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Slot>& keep);

/// p·a + (1−p)·b. Label lists must agree.
DensityMatrix mix(double p, const DensityMatrix& a, const DensityMatrix& b);

struct BellDecomposition {
  /// Diagonal in the Bell basis, ordered as `kBellOrder`.
  std::array<double, 4> weights{};
  /// Largest magnitude of an off-diagonal Bell-basis entry.
  double off_diagonal_norm = 0.0;
  /// Full 4x4 representation B† ρ B.
  Eigen::Matrix4cd bell_matrix = Eigen::Matrix4cd::Zero();

  double weight(Bell which) const { return weights[static_cast<std::size_t>(which)]; }
  Complex coherence(Bell row, Bell col) const {
    return bell_matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  /// Inverse transform B (B†ρB) B†.
  Eigen::Matrix4cd reconstruct() const;
};

BellDecomposition bell_decompose(const DensityMatrix& rho);

/// ½ Σ|λ_i(a − b)|. Label lists must agree.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const Matrix& a, const Matrix& b);

/// Largest entry magnitude of a − a†.
double hermiticity_error(const Matrix& a);

/// Kronecker product of two dense matrices.
Matrix kron(const Matrix& a, const Matrix& b);

/// Index permutation that realizes reordering a state over `from` into one
/// over `to` (both lists name the same slots). Element k is the row index in
/// the `from` ordering that lands at row k in the `to` ordering.
std::vector<Eigen::Index> slot_permutation(const std::vector<Slot>& from,
                                           const std::vector<Slot>& to);

/// Unnormalized block left on the remaining slots after projecting `slots` of
/// a (not necessarily normalized) density matrix onto the computational basis
/// state `bits`. Returned labels are the unmeasured slots in original order.
struct ConditionalBlock {
  Matrix block;
  std::vector<Slot> labels;
  double probability = 0.0;
};
ConditionalBlock project_computational(const Matrix& rho, const std::vector<Slot>& labels,
                                       const std::vector<Slot>& slots,
                                       std::span<const int> bits);

}  // namespace xypurify
