#pragma once

#include <vector>

#include "xypurify/density_matrix.hpp"

namespace xypurify {

/// Three-spin isotropic XY ring in the cavity-active basis {|0>, |e>}, with
/// |e> encoded as bit 1 and atom 1 as the most significant bit:
///
///   H = J Σ_{i≠j} (σ_i† σ_j + σ_j† σ_i) = J Σ_{bonds} (σˣσˣ + σʸσʸ).
///
/// The single-excitation block is 2J times the triangle adjacency matrix, so
/// every eigenvalue is an even multiple of J and e^{-iHπ/J} = I.
struct XYHamiltonian {
  double J = 0.0;
  Matrix matrix;
};

/// Throws a degenerate-coupling error when J == 0. The sign of J is free.
XYHamiltonian build_xy(double J);

struct EvolutionOperator {
  double t = 0.0;
  Matrix matrix;
  std::vector<Slot> labels;
};

inline const std::vector<Slot> kNodeASlots = {1, 2, 3};
inline const std::vector<Slot> kNodeBSlots = {4, 5, 6};
/// Canonical six-qubit ordering: node A's triplet first.
inline const std::vector<Slot> kCompositeSlots = {1, 2, 3, 4, 5, 6};

/// e^{-iHt} from the Hermitian eigendecomposition of H.
Matrix unitary_from_hermitian(const Matrix& hamiltonian, double t);

/// Triplet propagator over node A's slots.
EvolutionOperator evolve_triplet(const XYHamiltonian& h, double t);

/// U_A ⊗ U_B with identical generators, over `kCompositeSlots`.
EvolutionOperator evolve_composite(const XYHamiltonian& h, double t);

/// Total excitation number Σ_k |e><e|_k on `qubits` qubits.
Matrix number_operator(int qubits = 3);

/// H_I + stark · N. With stark = g²/Δ this is the cavity mean Hamiltonian.
Matrix mean_hamiltonian(const XYHamiltonian& h, double stark);

/// L(t) = exp(-i · stark · t · N), the phase that separates mean-Hamiltonian
/// evolution from XY evolution.
Matrix frame_correction(double stark, double t, int qubits = 3);

/// Largest entry of U†U − I.
double unitarity_error(const Matrix& u);

/// U ρ U† on a density matrix; slot lists must match.
DensityMatrix apply(const EvolutionOperator& u, const DensityMatrix& rho);

}  // namespace xypurify
