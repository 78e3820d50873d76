#include "mphp/baseband.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

namespace mphp {
namespace {

TEST(EffectiveChannel, SelectionByIdentityColumns) {
  std::mt19937_64 rng(1);
  const ComplexMatrix h = testing::random_matrix(5, 2, rng);
  const ComplexMatrix f = ComplexMatrix::Identity(5, 2);
  const ComplexMatrix hbar = effective_channel(h, f);
  EXPECT_EQ(hbar, h.adjoint().leftCols(2));
}

TEST(EffectiveChannel, ZeroChannel) {
  std::mt19937_64 rng(2);
  const ComplexMatrix f = testing::random_matrix(4, 3, rng);
  EXPECT_EQ(effective_channel(ComplexMatrix::Zero(4, 3), f), ComplexMatrix::Zero(3, 3));
}

TEST(ZfPrecoder, Identity) {
  EXPECT_LE((zf_precoder(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(ZfPrecoder, ScaleIsNormalizedAway) {
  EXPECT_LE((zf_precoder(2.0 * ComplexMatrix::Identity(2, 2)) - ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(ZfPrecoder, UpperTriangularHandCase) {
  ComplexMatrix hbar(2, 2);
  hbar << 1.0, 1.0, 0.0, 1.0;
  const ComplexMatrix w = zf_precoder(hbar);
  ComplexMatrix expected(2, 2);
  expected << 1.0, -1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
  EXPECT_LE((w - expected).norm(), 1e-12);
  ComplexMatrix product(2, 2);
  product << 1.0, 0.0, 0.0, 1.0 / std::sqrt(2.0);
  EXPECT_LE((hbar * w - product).norm(), 1e-12);
}

TEST(ZfPrecoder, RandomChannelsAreNulledWithUnitColumns) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Index S = 1 + static_cast<Index>(t % 6);
    const Index N = S + static_cast<Index>(t % 3);
    const ComplexMatrix hbar = testing::random_matrix(S, N, rng);
    const ComplexMatrix w = zf_precoder(hbar);
    const ComplexMatrix hw = hbar * w;
    for (Index k = 0; k < S; ++k) {
      EXPECT_NEAR(w.col(k).norm(), 1.0, 1e-10);
      for (Index i = 0; i < S; ++i) {
        if (i != k) EXPECT_LE(std::abs(hw(i, k)), 1e-8 * std::abs(hw(k, k)));
      }
    }
  }
}

TEST(ZfPrecoder, RankDeficientIsOutage) {
  ComplexMatrix hbar(2, 2);
  hbar << 1.0, 2.0, 2.0, 4.0;
  try {
    zf_precoder(hbar);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNearSingular);
  }
}

TEST(PowerAllocation, DirectFormula) {
  ComplexMatrix f = ComplexMatrix::Zero(2, 1);
  f(0, 0) = std::sqrt(0.5);
  const ComplexMatrix w = ComplexMatrix::Ones(1, 1);
  const std::vector<double> p = power_allocation(f, w, 1.0, 2);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR(p[0], 1.0, 1e-15);
}

TEST(PowerAllocation, UnitBeamsShareEvenly) {
  const std::vector<double> p = power_allocation(ComplexMatrix::Identity(4, 3), ComplexMatrix::Identity(3, 3), 3.0, 6);
  for (const double v : p) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(PowerAllocation, TotalPowerIsConserved) {
  std::mt19937_64 rng(4);
  const ComplexMatrix f = testing::random_matrix(8, 3, rng);
  const ComplexMatrix w = zf_precoder(testing::random_matrix(3, 3, rng));
  const std::vector<double> p = power_allocation(f, w, 2.0, 3);
  double total = 0.0;
  for (Index k = 0; k < 3; ++k) total += p[static_cast<std::size_t>(k)] * (f * w.col(k)).squaredNorm();
  EXPECT_NEAR(total, 2.0, 2e-9);
}

TEST(PowerAllocation, ZeroBeamIsRejected) {
  try {
    power_allocation(ComplexMatrix::Zero(3, 1), ComplexMatrix::Ones(1, 1), 1.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateBeam);
  }
}

}  // namespace
}  // namespace mphp
