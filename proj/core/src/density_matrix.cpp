#include "xypurify/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xypurify/errors.hpp"

namespace xypurify {

namespace {

std::size_t qubit_count_for_dim(Eigen::Index dim) {
  std::size_t n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d *= 2;
    ++n;
  }
  if (d != dim) fail(ErrorKind::shape, "matrix dimension " + std::to_string(dim) + " is not a power of two");
  return n;
}

std::string format_labels(const std::vector<Slot>& labels) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "," : "") << labels[i];
  os << ')';
  return os.str();
}

void require_unique(const std::vector<Slot>& labels) {
  std::vector<Slot> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorKind::label, "duplicate slot label in " + format_labels(labels));
  }
}

std::size_t find_position(const std::vector<Slot>& labels, Slot slot) {
  auto it = std::find(labels.begin(), labels.end(), slot);
  if (it == labels.end()) {
    fail(ErrorKind::label, "slot " + std::to_string(slot) + " not in " + format_labels(labels));
  }
  return static_cast<std::size_t>(it - labels.begin());
}

inline Eigen::Index bit_at(Eigen::Index index, std::size_t pos, std::size_t n) {
  return (index >> (n - 1 - pos)) & 1;
}

// Builds a full index from the bits of `sub` placed at `positions` (MSB first)
// on top of `base`.
inline Eigen::Index scatter(Eigen::Index base, Eigen::Index sub, const std::vector<std::size_t>& positions,
                            std::size_t n) {
  const std::size_t m = positions.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Eigen::Index bit = (sub >> (m - 1 - k)) & 1;
    base |= bit << (n - 1 - positions[k]);
  }
  return base;
}

}  // namespace

void Tolerance::validate() const {
  if (!(hermiticity > 0 && trace > 0 && psd > 0 && equality > 0)) {
    fail(ErrorKind::domain, "tolerances must be strictly positive");
  }
}

DensityMatrix::DensityMatrix(Matrix entries, std::vector<Slot> labels, const Tolerance& tol)
    : entries_(std::move(entries)), labels_(std::move(labels)) {
  tol.validate();
  if (entries_.rows() != entries_.cols()) fail(ErrorKind::shape, "density matrix must be square");
  if (entries_.rows() == 0) fail(ErrorKind::shape, "density matrix must be non-empty");
  const std::size_t n = qubit_count_for_dim(entries_.rows());
  if (n != labels_.size()) {
    fail(ErrorKind::shape, "dimension " + std::to_string(entries_.rows()) + " does not match " +
                               std::to_string(labels_.size()) + " slot labels");
  }
  require_unique(labels_);

  const double herm = hermiticity_error(entries_);
  if (herm > tol.hermiticity) {
    fail(ErrorKind::domain, "matrix is not Hermitian (max |rho - rho^dag| = " + std::to_string(herm) + ")");
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol.trace) {
    fail(ErrorKind::domain, "trace deviates from 1 (trace = " + std::to_string(tr.real()) + ")");
  }
  const Matrix hermitian_part = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol.psd) {
    fail(ErrorKind::domain, "matrix is not positive semidefinite (min eigenvalue " + std::to_string(min_eig) + ")");
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi, std::vector<Slot> labels) {
  const double norm = psi.norm();
  if (norm == 0.0) fail(ErrorKind::domain, "zero state vector");
  const Vector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint(), std::move(labels));
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<Slot> labels) {
  const Eigen::Index dim = Eigen::Index{1} << labels.size();
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim), std::move(labels));
}

DensityMatrix DensityMatrix::basis_state(std::span<const int> bits, std::vector<Slot> labels) {
  if (bits.size() != labels.size()) fail(ErrorKind::shape, "bit string length must match slot count");
  const std::size_t n = labels.size();
  Eigen::Index index = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (bits[k] != 0 && bits[k] != 1) fail(ErrorKind::domain, "bits must be 0 or 1");
    index |= Eigen::Index{bits[k]} << (n - 1 - k);
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m), std::move(labels));
}

std::size_t DensityMatrix::position_of(Slot slot) const { return find_position(labels_, slot); }

bool DensityMatrix::has_slot(Slot slot) const {
  return std::find(labels_.begin(), labels_.end(), slot) != labels_.end();
}

DensityMatrix DensityMatrix::relabeled(std::vector<Slot> labels) const {
  if (labels.size() != labels_.size()) fail(ErrorKind::label, "relabeling must keep the slot count");
  require_unique(labels);
  return DensityMatrix(Unchecked{}, entries_, std::move(labels));
}

DensityMatrix DensityMatrix::permuted(const std::vector<Slot>& order) const {
  const auto perm = slot_permutation(labels_, order);
  const auto dim = static_cast<Eigen::Index>(perm.size());
  Matrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) out(i, j) = entries_(perm[i], perm[j]);
  }
  return DensityMatrix(Unchecked{}, std::move(out), order);
}

std::vector<Eigen::Index> slot_permutation(const std::vector<Slot>& from, const std::vector<Slot>& to) {
  if (from.size() != to.size()) fail(ErrorKind::label, "permutation must name every slot exactly once");
  require_unique(to);
  const std::size_t n = from.size();
  std::vector<std::size_t> source_pos(n);
  for (std::size_t p = 0; p < n; ++p) source_pos[p] = find_position(from, to[p]);

  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) {
    Eigen::Index old = 0;
    for (std::size_t p = 0; p < n; ++p) old |= bit_at(k, p, n) << (n - 1 - source_pos[p]);
    perm[static_cast<std::size_t>(k)] = old;
  }
  return perm;
}

Eigen::Vector4cd bell_vector(Bell which) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (which) {
    case Bell::phi_plus: return Eigen::Vector4cd(s, 0, 0, s);
    case Bell::phi_minus: return Eigen::Vector4cd(s, 0, 0, -s);
    case Bell::psi_plus: return Eigen::Vector4cd(0, s, s, 0);
    case Bell::psi_minus: return Eigen::Vector4cd(0, s, -s, 0);
  }
  return Eigen::Vector4cd::Zero();
}

Eigen::Matrix4cd bell_projector(Bell which) {
  const Eigen::Vector4cd v = bell_vector(which);
  return v * v.adjoint();
}

Eigen::Matrix4cd bell_basis() {
  Eigen::Matrix4cd b;
  for (std::size_t k = 0; k < kBellOrder.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = bell_vector(kBellOrder[k]);
  return b;
}

bool below_purification_threshold(double f) { return f <= 0.5; }

DensityMatrix werner(double f, SlotPair pair) {
  if (!(f >= 0.0 && f <= 1.0)) fail(ErrorKind::domain, "Werner fidelity must lie in [0, 1], got " + std::to_string(f));
  const double rest = (1.0 - f) / 3.0;
  return bell_diagonal({f, rest, rest, rest}, pair);
}

DensityMatrix bell_diagonal(const std::array<double, 4>& weights, SlotPair pair) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (std::size_t k = 0; k < 4; ++k) m += weights[k] * bell_projector(kBellOrder[k]);
  return DensityMatrix(Matrix(m), {pair.first, pair.second});
}

double fidelity(const DensityMatrix& rho, SlotPair pair) {
  if (rho.dim() != 4) fail(ErrorKind::shape, "fidelity needs a two-qubit state, got dimension " + std::to_string(rho.dim()));
  const DensityMatrix ordered = rho.permuted({pair.first, pair.second});
  const Eigen::Vector4cd phi = bell_vector(Bell::phi_plus);
  return (phi.adjoint() * ordered.matrix() * phi)(0, 0).real();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  for (Slot s : b.labels()) {
    if (a.has_slot(s)) fail(ErrorKind::label, "slot " + std::to_string(s) + " appears in both factors");
  }
  std::vector<Slot> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(labels));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Slot>& keep) {
  if (keep.empty()) fail(ErrorKind::domain, "partial trace needs at least one slot to keep");
  const std::size_t n = rho.qubits();
  std::vector<bool> kept(n, false);
  for (Slot s : keep) kept[rho.position_of(s)] = true;
  std::vector<std::size_t> keep_pos, trace_pos;
  std::vector<Slot> out_labels;
  for (std::size_t p = 0; p < n; ++p) {
    if (kept[p]) {
      keep_pos.push_back(p);
      out_labels.push_back(rho.labels()[p]);
    } else {
      trace_pos.push_back(p);
    }
  }
  if (out_labels.size() != keep.size()) fail(ErrorKind::label, "duplicate slot in keep set");

  const Eigen::Index kdim = Eigen::Index{1} << keep_pos.size();
  const Eigen::Index tdim = Eigen::Index{1} << trace_pos.size();
  Matrix out = Matrix::Zero(kdim, kdim);
  const Matrix& m = rho.matrix();
  for (Eigen::Index a = 0; a < kdim; ++a) {
    const Eigen::Index ra = scatter(0, a, keep_pos, n);
    for (Eigen::Index b = 0; b < kdim; ++b) {
      const Eigen::Index rb = scatter(0, b, keep_pos, n);
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < tdim; ++t) {
        acc += m(scatter(ra, t, trace_pos, n), scatter(rb, t, trace_pos, n));
      }
      out(a, b) = acc;
    }
  }
  return DensityMatrix(std::move(out), std::move(out_labels));
}

DensityMatrix mix(double p, const DensityMatrix& a, const DensityMatrix& b) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::domain, "mixing weight must lie in [0, 1]");
  if (a.labels() != b.labels()) fail(ErrorKind::label, "mixed states must share the slot ordering");
  return DensityMatrix(p * a.matrix() + (1.0 - p) * b.matrix(), a.labels());
}

Eigen::Matrix4cd BellDecomposition::reconstruct() const {
  const Eigen::Matrix4cd b = bell_basis();
  return b * bell_matrix * b.adjoint();
}

BellDecomposition bell_decompose(const DensityMatrix& rho) {
  if (rho.dim() != 4) fail(ErrorKind::shape, "Bell decomposition needs a two-qubit state");
  const Eigen::Matrix4cd b = bell_basis();
  BellDecomposition out;
  out.bell_matrix = b.adjoint() * Eigen::Matrix4cd(rho.matrix()) * b;
  for (Eigen::Index i = 0; i < 4; ++i) {
    out.weights[static_cast<std::size_t>(i)] = out.bell_matrix(i, i).real();
    for (Eigen::Index j = 0; j < 4; ++j) {
      if (i != j) out.off_diagonal_norm = std::max(out.off_diagonal_norm, std::abs(out.bell_matrix(i, j)));
    }
  }
  return out;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::shape, "trace distance needs equal shapes");
  const Matrix diff = a - b;
  const Matrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.labels() != b.labels()) fail(ErrorKind::label, "trace distance needs matching slot order");
  return trace_distance(a.matrix(), b.matrix());
}

double hermiticity_error(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

ConditionalBlock project_computational(const Matrix& rho, const std::vector<Slot>& labels,
                                       const std::vector<Slot>& slots, std::span<const int> bits) {
  if (slots.size() != bits.size()) fail(ErrorKind::shape, "one outcome bit per measured slot is required");
  const std::size_t n = labels.size();
  if (rho.rows() != (Eigen::Index{1} << n)) fail(ErrorKind::shape, "matrix does not match slot labels");

  std::vector<bool> measured(n, false);
  Eigen::Index base = 0;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const std::size_t p = find_position(labels, slots[k]);
    if (measured[p]) fail(ErrorKind::label, "slot measured twice");
    measured[p] = true;
    base |= Eigen::Index{bits[k] != 0} << (n - 1 - p);
  }
  ConditionalBlock out;
  std::vector<std::size_t> rest_pos;
  for (std::size_t p = 0; p < n; ++p) {
    if (!measured[p]) {
      rest_pos.push_back(p);
      out.labels.push_back(labels[p]);
    }
  }
  const Eigen::Index rdim = Eigen::Index{1} << rest_pos.size();
  out.block.resize(rdim, rdim);
  for (Eigen::Index a = 0; a < rdim; ++a) {
    const Eigen::Index ra = scatter(base, a, rest_pos, n);
    for (Eigen::Index b = 0; b < rdim; ++b) out.block(a, b) = rho(ra, scatter(base, b, rest_pos, n));
  }
  out.probability = out.block.trace().real();
  return out;
}

}  // namespace xypurify
