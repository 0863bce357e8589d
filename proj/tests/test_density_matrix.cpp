#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "xypurify/density_matrix.hpp"
#include "xypurify/errors.hpp"

namespace xp = xypurify;

namespace {

xp::ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const xp::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an xypurify::Error";
  return xp::ErrorKind::analysis;
}

xp::Matrix random_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n;
  xp::Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = {n(rng), n(rng)};
  xp::Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST(DensityMatrix, RejectsInvalidMatrices) {
  xp::Matrix not_hermitian = xp::Matrix::Identity(2, 2) * 0.5;
  not_hermitian(0, 1) = 0.1;
  EXPECT_EQ(kind_of([&] { xp::DensityMatrix(not_hermitian, {1}); }), xp::ErrorKind::domain);

  xp::Matrix wrong_trace = xp::Matrix::Identity(2, 2);
  EXPECT_EQ(kind_of([&] { xp::DensityMatrix(wrong_trace, {1}); }), xp::ErrorKind::domain);

  xp::Matrix negative = xp::Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_EQ(kind_of([&] { xp::DensityMatrix(negative, {1}); }), xp::ErrorKind::domain);

  EXPECT_EQ(kind_of([&] { xp::DensityMatrix(xp::Matrix::Identity(3, 3) / 3.0, {1, 2}); }), xp::ErrorKind::shape);
  EXPECT_EQ(kind_of([&] { xp::DensityMatrix(xp::Matrix::Identity(4, 4) / 4.0, {1}); }), xp::ErrorKind::shape);
  EXPECT_EQ(kind_of([&] { xp::DensityMatrix(xp::Matrix::Identity(4, 4) / 4.0, {2, 2}); }), xp::ErrorKind::label);
}

TEST(DensityMatrix, BellVectorsFollowStandardConvention) {
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(xp::bell_vector(xp::Bell::phi_plus)(0) - s), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(xp::bell_vector(xp::Bell::phi_plus)(3) - s), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(xp::bell_vector(xp::Bell::phi_minus)(3) + s), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(xp::bell_vector(xp::Bell::psi_plus)(1) - s), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(xp::bell_vector(xp::Bell::psi_minus)(2) + s), 0.0, 1e-15);
  const Eigen::Matrix4cd b = xp::bell_basis();
  EXPECT_LT((b.adjoint() * b - Eigen::Matrix4cd::Identity()).norm(), 1e-14);
}

TEST(DensityMatrix, WernerMatchesOracleAndFidelity) {
  for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const xp::DensityMatrix w = xp::werner(f, {3, 6});
    EXPECT_LT((w.matrix() - xp::Matrix(oracle::werner(f))).norm(), 1e-14);
    EXPECT_NEAR(xp::fidelity(w, {3, 6}), f, 1e-14);
  }
  EXPECT_EQ(kind_of([] { xp::werner(1.2); }), xp::ErrorKind::domain);
  EXPECT_EQ(kind_of([] { xp::werner(-0.1); }), xp::ErrorKind::domain);
  EXPECT_TRUE(xp::below_purification_threshold(0.5));
  EXPECT_FALSE(xp::below_purification_threshold(0.5000001));
}

TEST(DensityMatrix, FidelityRequiresMatchingPair) {
  const xp::DensityMatrix w = xp::werner(0.8, {1, 4});
  EXPECT_EQ(kind_of([&] { xp::fidelity(w, {2, 5}); }), xp::ErrorKind::label);
  EXPECT_NEAR(xp::fidelity(w, {1, 4}), 0.8, 1e-14);
}

TEST(DensityMatrix, BellDecompositionRoundTrips) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const xp::DensityMatrix rho(random_state(rng, 4), {1, 2});
    const xp::BellDecomposition d = xp::bell_decompose(rho);
    EXPECT_LT((d.reconstruct() - rho.matrix()).norm(), 1e-13);
    double sum = 0.0;
    for (double w : d.weights) sum += w;
    EXPECT_NEAR(sum, 1.0, 1e-13);
  }
  const xp::BellDecomposition w = xp::bell_decompose(xp::werner(0.7, {1, 2}));
  EXPECT_LT(w.off_diagonal_norm, 1e-15);
  EXPECT_NEAR(w.weight(xp::Bell::psi_minus), 0.1, 1e-15);
}

TEST(DensityMatrix, PartialTraceMatchesBruteForce) {
  std::mt19937_64 rng(3);
  const std::vector<std::vector<int>> keeps = {{1}, {3}, {1, 3}, {2, 4}, {4, 1}, {1, 2, 3}};
  for (const auto& keep : keeps) {
    const xp::Matrix m = random_state(rng, 16);
    const xp::DensityMatrix rho(m, {1, 2, 3, 4});
    const xp::DensityMatrix reduced = xp::partial_trace(rho, keep);
    // The library keeps slots in the order they appear in rho.
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(reduced.labels(), sorted);
    EXPECT_LT((reduced.matrix() - oracle::partial_trace(m, 4, sorted)).norm(), 1e-13);
  }
  EXPECT_EQ(kind_of([] { xp::partial_trace(xp::werner(0.6, {1, 2}), {7}); }), xp::ErrorKind::label);
}

TEST(DensityMatrix, TensorThenTraceRecoversFactors) {
  const xp::DensityMatrix a = xp::werner(0.9, {1, 4});
  const xp::DensityMatrix b = xp::werner(0.6, {2, 5});
  const xp::DensityMatrix ab = xp::tensor(a, b);
  EXPECT_EQ(ab.labels(), (std::vector<int>{1, 4, 2, 5}));
  EXPECT_LT((xp::partial_trace(ab, {1, 4}).matrix() - a.matrix()).norm(), 1e-14);
  EXPECT_LT((xp::partial_trace(ab, {2, 5}).matrix() - b.matrix()).norm(), 1e-14);
  EXPECT_EQ(kind_of([&] { xp::tensor(a, a); }), xp::ErrorKind::label);
}

TEST(DensityMatrix, PermutationAgreesWithElementwiseProduct) {
  const Eigen::Matrix4cd r14 = oracle::werner(0.8);
  const Eigen::Matrix4cd r25 = oracle::werner(0.65);
  const Eigen::Matrix4cd r36 = oracle::bell_diagonal({0.4, 0.3, 0.2, 0.1});
  const xp::DensityMatrix product =
      xp::tensor(xp::tensor(xp::werner(0.8, {1, 4}), xp::werner(0.65, {2, 5})), xp::bell_diagonal({0.4, 0.3, 0.2, 0.1}, {3, 6}));
  const xp::DensityMatrix ordered = product.permuted({1, 2, 3, 4, 5, 6});
  EXPECT_LT((ordered.matrix() - oracle::six_qubit_product(r14, r25, r36)).norm(), 1e-14);
  // Permuting back restores the original matrix exactly.
  EXPECT_LT((ordered.permuted(product.labels()).matrix() - product.matrix()).norm(), 1e-15);
}

TEST(DensityMatrix, BasisAndMixedStates) {
  const std::array<int, 2> bits{1, 0};
  const xp::DensityMatrix b = xp::DensityMatrix::basis_state(bits, {3, 6});
  EXPECT_DOUBLE_EQ(b(2, 2).real(), 1.0);
  const xp::DensityMatrix mixed = xp::DensityMatrix::maximally_mixed({1, 2});
  EXPECT_NEAR(xp::fidelity(mixed, {1, 2}), 0.25, 1e-15);
  EXPECT_NEAR(xp::trace_distance(mixed, xp::werner(0.25, {1, 2})), 0.0, 1e-14);
  const xp::DensityMatrix m = xp::mix(0.5, xp::werner(1.0, {1, 2}), mixed);
  EXPECT_NEAR(xp::fidelity(m, {1, 2}), 0.625, 1e-15);
}

TEST(DensityMatrix, TraceDistanceOfOrthogonalStates) {
  const std::array<int, 2> a{0, 0};
  const std::array<int, 2> b{1, 1};
  EXPECT_NEAR(xp::trace_distance(xp::DensityMatrix::basis_state(a, {1, 2}), xp::DensityMatrix::basis_state(b, {1, 2})),
              1.0, 1e-14);
}

TEST(DensityMatrix, ProjectionProbabilitiesSumToOne) {
  std::mt19937_64 rng(5);
  const xp::Matrix m = random_state(rng, 8);
  double total = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const std::array<int, 2> bits{x, y};
      const xp::ConditionalBlock block = xp::project_computational(m, {1, 2, 3}, {1, 3}, bits);
      EXPECT_EQ(block.labels, std::vector<int>{2});
      total += block.probability;
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-13);
}

TEST(DensityMatrix, ToleranceValidation) {
  xp::Tolerance tol;
  EXPECT_NO_THROW(tol.validate());
  tol.psd = 0.0;
  EXPECT_EQ(kind_of([&] { tol.validate(); }), xp::ErrorKind::domain);
}
