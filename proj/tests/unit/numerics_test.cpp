#include "mphp/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

namespace mphp {
namespace {

TEST(HermitianEig, DiagonalMatrix) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  const EigenDecomposition eig = hermitian_eig(HermitianMatrix(a));
  EXPECT_DOUBLE_EQ(eig.values(0), 2.0);
  EXPECT_NEAR(eig.values(1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eig.vectors(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(eig.vectors(1, 1)), 1.0, 1e-12);
}

TEST(HermitianEig, SwapMatrixUpToPhase) {
  ComplexMatrix a(2, 2);
  a << 0.0, 1.0, 1.0, 0.0;
  const EigenDecomposition eig = hermitian_eig(HermitianMatrix(a));
  EXPECT_NEAR(eig.values(0), 1.0, 1e-14);
  EXPECT_NEAR(eig.values(1), -1.0, 1e-14);
  ComplexVector plus(2), minus(2);
  plus << 1.0, 1.0;
  minus << 1.0, -1.0;
  plus /= std::sqrt(2.0);
  minus /= std::sqrt(2.0);
  EXPECT_NEAR(std::abs(plus.dot(eig.vectors.col(0))), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(minus.dot(eig.vectors.col(1))), 1.0, 1e-12);
}

TEST(HermitianEig, EmptyMatrixIsInvalid) {
  try {
    hermitian_eig(HermitianMatrix(ComplexMatrix(0, 0)));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
  }
}

TEST(HermitianEig, RandomPropertiesHold) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + trial % 12;
    const HermitianMatrix a = testing::random_hermitian(n, rng);
    const EigenDecomposition eig = hermitian_eig(a);

    const ComplexMatrix rebuilt = eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
    EXPECT_LE(testing::relative_frobenius(rebuilt, a.matrix()), kReconstructionTolerance);

    const ComplexMatrix gram = eig.vectors.adjoint() * eig.vectors;
    EXPECT_LE((gram - ComplexMatrix::Identity(n, n)).norm(), 1e-10);

    for (Index i = 1; i < n; ++i) EXPECT_GE(eig.values(i - 1), eig.values(i));
    EXPECT_LE(eig.values.cwiseAbs().maxCoeff(), a.matrix().norm() * (1.0 + 1e-12));
    EXPECT_NEAR(eig.values.sum(), a.trace(), 1e-10 * std::max(1.0, std::abs(a.trace())) + 1e-10 * a.matrix().norm());
  }
}

TEST(HermitianEig, PsdEigenvaluesAreNonNegative) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const HermitianMatrix a = testing::random_psd(10, 1 + trial % 10, rng);
    const EigenDecomposition eig = hermitian_eig(a);
    EXPECT_GE(eig.values.minCoeff(), -1e-10 * a.trace());
  }
}

TEST(HermitianMatrix, ConstructionSymmetrizesExactly) {
  std::mt19937_64 rng(3);
  const HermitianMatrix a(testing::random_matrix(6, 6, rng));
  EXPECT_TRUE(a.matrix() == a.matrix().adjoint());
}

TEST(SolveRightInverse, IdentityAndScalar) {
  const ComplexMatrix eye = ComplexMatrix::Identity(3, 3);
  EXPECT_LE((solve_right_inverse(eye) - eye).norm(), 1e-15);
  EXPECT_LE((solve_right_inverse(2.0 * eye) - 0.5 * eye).norm(), 1e-15);
}

TEST(SolveRightInverse, UpperTriangular) {
  ComplexMatrix a(2, 2);
  a << 1.0, 1.0, 0.0, 1.0;
  ComplexMatrix expected(2, 2);
  expected << 1.0, -1.0, 0.0, 1.0;
  EXPECT_LE((solve_right_inverse(a) - expected).norm(), 1e-14);
}

TEST(SolveRightInverse, RandomWellConditioned) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = testing::random_matrix(6, 6, rng) + 6.0 * ComplexMatrix::Identity(6, 6);
    const ComplexMatrix b = solve_right_inverse(a);
    EXPECT_LE((a * b - ComplexMatrix::Identity(6, 6)).norm(), kSolveTolerance);
  }
}

TEST(SolveRightInverse, NearSingularIsReported) {
  ComplexMatrix a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0 + 1e-14;
  try {
    solve_right_inverse(a);
    FAIL() << "expected near-singular error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNearSingular);
  }
  EXPECT_THROW(solve_right_inverse(ComplexMatrix::Zero(2, 2)), Error);
}

}  // namespace
}  // namespace mphp
