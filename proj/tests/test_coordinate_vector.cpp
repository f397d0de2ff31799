#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <framelab/coordinate_vector.hpp>

using namespace framelab;

namespace {

CoordinateVector gaussian(std::mt19937_64& rng, Index lo, Index hi) {
  std::normal_distribution<double> normal;
  CoordinateVector v;
  for (Index n = lo; n <= hi; ++n) v.set(n, normal(rng));
  return v;
}

}  // namespace

TEST(CoordinateVector, AbsentIndicesReadAsZero) {
  CoordinateVector v{{3, 2.0}};
  EXPECT_EQ(v[3], 2.0);
  EXPECT_EQ(v[-3], 0.0);
  v.set(3, 0.0);
  EXPECT_TRUE(v.is_zero());
}

TEST(CoordinateVector, UnitVectorNorms) {
  for (double p : {1.1, 1.5, 2.0, 3.0, 16.0}) EXPECT_EQ(norm(CoordinateVector::unit(0), p), 1.0);
  EXPECT_EQ(norm(CoordinateVector{}, 2.0), 0.0);
  EXPECT_THROW(norm(CoordinateVector::unit(0), 0.5), std::invalid_argument);
}

TEST(CoordinateVector, PairingOfUnitVectorsIsKronecker) {
  for (Index n = -3; n <= 3; ++n) {
    for (Index m = -3; m <= 3; ++m) {
      EXPECT_EQ(pair(CoordinateVector::unit(n), CoordinateVector::unit(m)), n == m ? 1.0 : 0.0);
    }
  }
}

TEST(CoordinateVector, NormsOfSmallVectors) {
  const CoordinateVector v{{-1, 3.0}, {2, -4.0}};
  EXPECT_DOUBLE_EQ(norm(v, 2.0), 5.0);
  EXPECT_DOUBLE_EQ(norm(v, 1.0), 7.0);
  EXPECT_DOUBLE_EQ(sup_norm(v), 4.0);
  EXPECT_DOUBLE_EQ(norm(v, 3.0), std::cbrt(27.0 + 64.0));
  EXPECT_DOUBLE_EQ(conjugate_exponent(3.0), 1.5);
  EXPECT_DOUBLE_EQ(conjugate_exponent(2.0), 2.0);
}

TEST(CoordinateVector, ShiftAndRestrict) {
  const CoordinateVector v{{-1, 3.0}, {2, -4.0}};
  EXPECT_EQ(shifted(v, 5), (CoordinateVector{{4, 3.0}, {7, -4.0}}));
  EXPECT_EQ(restricted(v, 0, 10), (CoordinateVector{{2, -4.0}}));
}

TEST(CoordinateVectorProperties, HolderForRandomDraws) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 300; ++k) {
    const auto x = gaussian(rng, -10, 10);
    const auto f = gaussian(rng, -5, 15);
    for (double p : {1.2, 1.5, 2.0, 3.0, 8.0}) {
      EXPECT_LE(std::fabs(pair(x, f)), norm(x, p) * norm(f, conjugate_exponent(p)) * (1 + 1e-12));
    }
  }
}

TEST(CoordinateVectorProperties, TriangleInequalityAndHomogeneity) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 300; ++k) {
    const auto x = gaussian(rng, -6, 6);
    const auto y = gaussian(rng, -2, 9);
    const double lambda = u(rng);
    for (double p : {1.5, 2.0, 3.0}) {
      EXPECT_LE(norm(x + y, p), (norm(x, p) + norm(y, p)) * (1 + 1e-12));
      EXPECT_NEAR(norm(lambda * x, p), std::fabs(lambda) * norm(x, p), 1e-12 * norm(x, p) * std::fabs(lambda));
    }
  }
}

TEST(CoordinateVectorProperties, PairingIsBilinear) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 300; ++k) {
    const auto x = gaussian(rng, -6, 6);
    const auto y = gaussian(rng, -2, 9);
    const auto f = gaussian(rng, -8, 3);
    const double a = u(rng);
    const double b = u(rng);
    const double lhs = pair(axpy(b, y, a * x), f);
    const double rhs = a * pair(x, f) + b * pair(y, f);
    const double scale = std::fabs(a) * norm(x, 2) * norm(f, 2) + std::fabs(b) * norm(y, 2) * norm(f, 2);
    EXPECT_NEAR(lhs, rhs, 1e-12 * scale);
  }
}
