#include "xypurify/xy_dynamics.hpp"

#include <bit>
#include <cmath>

#include "xypurify/errors.hpp"

namespace xypurify {

namespace {

constexpr int kTripletQubits = 3;
constexpr Eigen::Index kTripletDim = 8;

// σ_i† σ_j + σ_j† σ_i: moves one excitation between sites i and j.
void add_hopping(Matrix& h, int i, int j, double amplitude) {
  const Eigen::Index bi = Eigen::Index{1} << (kTripletQubits - 1 - i);
  const Eigen::Index bj = Eigen::Index{1} << (kTripletQubits - 1 - j);
  for (Eigen::Index s = 0; s < kTripletDim; ++s) {
    const bool ei = (s & bi) != 0;
    const bool ej = (s & bj) != 0;
    if (ei != ej) h(s ^ bi ^ bj, s) += amplitude;
  }
}

}  // namespace

XYHamiltonian build_xy(double J) {
  if (J == 0.0) fail(ErrorKind::degenerate_coupling, "XY coupling J must be non-zero");
  XYHamiltonian h{J, Matrix::Zero(kTripletDim, kTripletDim)};
  for (int i = 0; i < kTripletQubits; ++i) {
    for (int j = 0; j < kTripletQubits; ++j) {
      // Ordered pairs: each bond enters twice.
      if (i != j) add_hopping(h.matrix, i, j, J);
    }
  }
  return h;
}

Matrix unitary_from_hermitian(const Matrix& hamiltonian, double t) {
  if (!std::isfinite(t)) fail(ErrorKind::domain, "evolution time must be finite");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
  const auto& vecs = solver.eigenvectors();
  Vector phases(vecs.cols());
  for (Eigen::Index k = 0; k < vecs.cols(); ++k) phases(k) = std::polar(1.0, -solver.eigenvalues()(k) * t);
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

EvolutionOperator evolve_triplet(const XYHamiltonian& h, double t) {
  return {t, unitary_from_hermitian(h.matrix, t), kNodeASlots};
}

EvolutionOperator evolve_composite(const XYHamiltonian& h, double t) {
  const Matrix u = unitary_from_hermitian(h.matrix, t);
  return {t, kron(u, u), kCompositeSlots};
}

Matrix number_operator(int qubits) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  Matrix n = Matrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) n(s, s) = static_cast<double>(std::popcount(static_cast<unsigned long>(s)));
  return n;
}

Matrix mean_hamiltonian(const XYHamiltonian& h, double stark) {
  return h.matrix + stark * number_operator(kTripletQubits);
}

Matrix frame_correction(double stark, double t, int qubits) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  Matrix l = Matrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    l(s, s) = std::polar(1.0, -stark * t * std::popcount(static_cast<unsigned long>(s)));
  }
  return l;
}

double unitarity_error(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

DensityMatrix apply(const EvolutionOperator& u, const DensityMatrix& rho) {
  if (u.labels != rho.labels()) fail(ErrorKind::label, "propagator and state use different slot orderings");
  const Matrix out = u.matrix * rho.matrix() * u.matrix.adjoint();
  return DensityMatrix(0.5 * (out + out.adjoint()), rho.labels());
}

}  // namespace xypurify
