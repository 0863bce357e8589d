#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "xypurify/errors.hpp"
#include "xypurify/xy_dynamics.hpp"

namespace xp = xypurify;
using std::numbers::pi;

namespace {

// Pauli-matrix construction of J Σ_bonds (σˣσˣ + σʸσʸ) on a 3-ring.
xp::Matrix pauli_ring(double J) {
  xp::Matrix x(2, 2), y(2, 2), id = xp::Matrix::Identity(2, 2);
  x << 0, 1, 1, 0;
  y << 0, xp::Complex(0, -1), xp::Complex(0, 1), 0;
  auto op = [&](int site, const xp::Matrix& a, int other, const xp::Matrix& b) {
    xp::Matrix out = xp::Matrix::Identity(1, 1);
    for (int k = 1; k <= 3; ++k) out = xp::kron(out, k == site ? a : (k == other ? b : id));
    return out;
  };
  xp::Matrix h = xp::Matrix::Zero(8, 8);
  for (auto [i, j] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 3}}) h += op(i, x, j, x) + op(i, y, j, y);
  return J * h;
}

}  // namespace

TEST(XYDynamics, HamiltonianMatchesPauliForm) {
  for (double J : {1.0, -0.7, 2.5}) {
    const xp::XYHamiltonian h = xp::build_xy(J);
    EXPECT_LT((h.matrix - pauli_ring(J)).norm(), 1e-14);
    EXPECT_LT(xp::hermiticity_error(h.matrix), 1e-15);
  }
  EXPECT_THROW(xp::build_xy(0.0), xp::Error);
}

TEST(XYDynamics, SingleExcitationSpectrumIsTriangle) {
  // Triangle adjacency has eigenvalues {2, −1, −1}; each bond carries 2J.
  const double J = 1.3;
  const xp::XYHamiltonian h = xp::build_xy(J);
  Eigen::Matrix3cd block;
  const std::array<int, 3> idx{4, 2, 1};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) block(a, b) = h.matrix(idx[a], idx[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(block);
  std::array<double, 3> ev{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
  std::sort(ev.begin(), ev.end());
  EXPECT_NEAR(ev[0], -2.0 * J, 1e-13);
  EXPECT_NEAR(ev[1], -2.0 * J, 1e-13);
  EXPECT_NEAR(ev[2], 4.0 * J, 1e-13);
}

TEST(XYDynamics, ConservesExcitationNumber) {
  const xp::XYHamiltonian h = xp::build_xy(0.9);
  const xp::Matrix n = xp::number_operator();
  EXPECT_LT((h.matrix * n - n * h.matrix).norm(), 1e-14);
}

TEST(XYDynamics, PeriodRestoresIdentity) {
  for (double J : {1.0, -2.0, 0.37}) {
    const xp::XYHamiltonian h = xp::build_xy(J);
    const xp::Matrix u = xp::evolve_triplet(h, pi / std::abs(J)).matrix;
    EXPECT_LT((u - xp::Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(XYDynamics, PropagatorMatchesMatrixExponential) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> t(0.0, 5.0);
  for (int k = 0; k < 10; ++k) {
    const double time = t(rng);
    const xp::Matrix u = xp::evolve_composite(xp::build_xy(1.0), time).matrix;
    EXPECT_LT((u - oracle::propagator(1.0, time)).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT(xp::unitarity_error(u), 1e-12);
  }
}

TEST(XYDynamics, CompositeIsProductOfTriplets) {
  const xp::XYHamiltonian h = xp::build_xy(1.0);
  const xp::EvolutionOperator u = xp::evolve_composite(h, 0.4);
  const xp::Matrix ua = xp::evolve_triplet(h, 0.4).matrix;
  EXPECT_LT((u.matrix - xp::kron(ua, ua)).norm(), 1e-13);
  EXPECT_EQ(u.labels, xp::kCompositeSlots);
}

TEST(XYDynamics, ZeroTimeIsIdentity) {
  const xp::Matrix u = xp::evolve_triplet(xp::build_xy(1.0), 0.0).matrix;
  EXPECT_LT((u - xp::Matrix::Identity(8, 8)).norm(), 1e-14);
}

TEST(XYDynamics, MeanHamiltonianSplitsIntoFramePhase) {
  const double stark = 0.3;
  const double t = 1.7;
  const xp::XYHamiltonian h = xp::build_xy(0.5 * stark);
  const xp::Matrix mean = xp::unitary_from_hermitian(xp::mean_hamiltonian(h, stark), t);
  const xp::Matrix split = xp::frame_correction(stark, t) * xp::evolve_triplet(h, t).matrix;
  EXPECT_LT((mean - split).norm(), 1e-13);
}

TEST(XYDynamics, ApplyRequiresMatchingLabels) {
  const xp::EvolutionOperator u = xp::evolve_triplet(xp::build_xy(1.0), 0.2);
  const xp::DensityMatrix wrong = xp::DensityMatrix::maximally_mixed({4, 5, 6});
  EXPECT_THROW(xp::apply(u, wrong), xp::Error);
  const xp::DensityMatrix right = xp::DensityMatrix::maximally_mixed({1, 2, 3});
  EXPECT_LT((xp::apply(u, right).matrix() - right.matrix()).norm(), 1e-14);
}

TEST(XYDynamics, RejectsNonFiniteTime) {
  EXPECT_THROW(xp::evolve_triplet(xp::build_xy(1.0), std::numeric_limits<double>::infinity()), xp::Error);
}
