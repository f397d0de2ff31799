#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <framelab/step_function.hpp>

#include "oracles.hpp"

using namespace framelab;

namespace {

const StepFunction kUnit = StepFunction::indicator(0.0, 1.0);
const StepFunction kHaar = StepFunction::haar();

/// Rademacher-style r with 2^depth alternating cells on [0, 1).
StepFunction alternating(int depth) {
  const int cells = 1 << depth;
  std::vector<double> b, v;
  for (int i = 0; i <= cells; ++i) b.push_back(std::ldexp(i, -depth));
  for (int i = 0; i < cells; ++i) v.push_back(i % 2 ? -1.0 : 1.0);
  return {b, v};
}

}  // namespace

TEST(StepFunction, EvaluateUsesHalfOpenCells) {
  EXPECT_EQ(kUnit(0.5), 1.0);
  EXPECT_EQ(kUnit(0.0), 1.0);
  EXPECT_EQ(kUnit(1.0), 0.0);
  EXPECT_EQ(kUnit(-1e-300), 0.0);
  EXPECT_EQ(kHaar(0.75), -1.0);
  EXPECT_EQ(kHaar(0.5), -1.0);
  EXPECT_EQ(StepFunction{}(0.0), 0.0);
}

TEST(StepFunction, ConstructorRejectsMalformedInput) {
  EXPECT_THROW(StepFunction({0.0, 0.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(StepFunction({1.0, 0.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(StepFunction({0.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(StepFunction({0.0, INFINITY}, {1.0}), std::invalid_argument);
  EXPECT_THROW(StepFunction({0.0, 1.0}, {NAN}), std::invalid_argument);
}

TEST(StepFunction, CanonicalFormMergesAndTrims) {
  const StepFunction f({-1.0, 0.0, 0.5, 1.0, 2.0}, {0.0, 3.0, 3.0, 0.0});
  EXPECT_EQ(f.breakpoints(), (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(f.values(), (std::vector<double>{3.0}));
  EXPECT_TRUE(StepFunction({0.0, 1.0}, {0.0}).is_zero());
}

TEST(StepFunction, AddNegationIsZero) {
  EXPECT_TRUE(add(kHaar, scale(kHaar, -1.0)).is_zero());
  EXPECT_TRUE(subtract(kUnit, kUnit).is_zero());
}

TEST(StepFunction, HaarSquaredIsUnitIndicator) {
  EXPECT_EQ(multiply(kHaar, kHaar), kUnit);
  EXPECT_EQ(combine(kHaar, kHaar, CombineMode::multiply), kUnit);
}

TEST(StepFunction, RademacherProductIntegratesToZero) {
  EXPECT_EQ(integrate(multiply(alternating(1), alternating(2)), IntervalSet::single(0.0, 1.0)), 0.0);
  EXPECT_EQ(integrate(multiply(alternating(2), alternating(5))), 0.0);
}

TEST(StepFunction, DilateZeroIsIdentity) {
  for (double p : {1.5, 2.0, 3.0}) EXPECT_EQ(dilate(kHaar, 0.0, p), kHaar);
}

TEST(StepFunction, DilatedHaarMatchesDirectFormula) {
  const auto d = dilate(kHaar, 1.0, 2.0);
  EXPECT_EQ(d.breakpoints(), (std::vector<double>{0.0, 0.25, 0.5}));
  // Oracle: 2^{a/p} ψ(2^a t) evaluated pointwise.
  for (double t = -0.3; t < 1.2; t += 1.0 / 64) {
    EXPECT_NEAR(d(t), std::sqrt(2.0) * kHaar(2.0 * t), 1e-15) << "t=" << t;
  }
  EXPECT_NEAR(d(0.1), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d(0.3), -std::sqrt(2.0), 1e-15);
}

TEST(StepFunction, DilationsCompose) {
  std::mt19937_64 rng(7);
  const auto f = oracle::random_dyadic_step(rng, -1.0, 3, 2);
  for (double p : {1.5, 2.0, 3.0}) {
    for (auto [a, b] : {std::pair{0.5, 0.25}, {1.0, -2.0}, {-0.75, 0.3}}) {
      const auto lhs = dilate(dilate(f, a, p), b, p);
      const auto rhs = dilate(f, a + b, p);
      EXPECT_LT(lp_distance(lhs, rhs, p), 1e-12);
    }
  }
}

TEST(StepFunction, HaarNormAndMean) {
  for (double p : {1.5, 2.0, 3.0}) EXPECT_DOUBLE_EQ(lp_norm(kHaar, p), 1.0);
  EXPECT_EQ(integrate(kHaar, IntervalSet::single(0.0, 1.0)), 0.0);
  EXPECT_EQ(integrate(kHaar, IntervalSet::single(0.0, 0.25)), 0.25);
  EXPECT_EQ(integrate(kHaar, IntervalSet({{0.0, 0.25}, {0.75, 2.0}})), 0.0);
}

TEST(StepFunction, IntegrateProductAgreesWithMultiply) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto f = oracle::random_dyadic_step(rng, -2.0, 3, 3);
    const auto g = oracle::random_dyadic_step(rng, -0.5, 2, 4);
    const auto e = IntervalSet({{-1.3, -0.2}, {0.1, 0.7}});
    EXPECT_NEAR(integrate_product(f, g), integrate(multiply(f, g)), 1e-12);
    EXPECT_NEAR(integrate_product(f, g, &e), integrate(multiply(f, g), e), 1e-12);
    // Oracle: pointwise midpoint sum on a grid refining every breakpoint.
    const double dense = oracle::midpoint_integral([&](double t) { return f(t) * g(t); }, -2.0, 2.0, 1 << 10);
    EXPECT_NEAR(inner(f, g), dense, 1e-12);
  }
}

TEST(StepFunction, PeriodizedSupOfUnitIndicators) {
  EXPECT_DOUBLE_EQ(periodized_l1_sup(kUnit), 1.0);
  EXPECT_DOUBLE_EQ(periodized_l1_sup(StepFunction::indicator(0.0, 2.0)), 2.0);
  EXPECT_DOUBLE_EQ(periodized_l1_sup(StepFunction::indicator(0.25, 1.75)), 2.0);
  EXPECT_DOUBLE_EQ(periodized_l1_sup(StepFunction::indicator(0.25, 0.5, -3.0)), 3.0);
  EXPECT_EQ(periodized_l1_sup(StepFunction{}), 0.0);
}

TEST(StepFunction, PeriodizedSupMatchesDenseSampling) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 25; ++k) {
    const auto f = oracle::random_dyadic_step(rng, -1.5, 4, 3);
    const double expected =
        oracle::midpoint_max([&](double t) { return oracle::periodization_at(f, t); }, 0.0, 1.0, 1 << 6);
    EXPECT_NEAR(periodized_l1_sup(f), expected, 1e-12);
  }
}

TEST(StepFunction, PeriodizedSupOfDisjointUnitBlocksIsCoefficientSum) {
  // Σ a_n r(· − n) with |r| = 1 folds onto the constant Σ |a_n|.
  const double a[] = {0.5, -0.25, 0.125, 0.7};
  std::vector<StepFunction> terms;
  std::vector<double> coeffs;
  double expected = 0.0;
  for (int n = 0; n < 4; ++n) {
    terms.push_back(translate(alternating(n + 1), 2.0 * n));
    coeffs.push_back(a[n]);
    expected += std::fabs(a[n]);
  }
  const auto f = linear_combination(terms, coeffs);
  EXPECT_NEAR(periodized_l1_sup(f), expected, 1e-15);
  EXPECT_NEAR(oracle::midpoint_max([&](double t) { return oracle::periodization_at(f, t); }, 0.0, 1.0, 256),
              expected, 1e-15);
}

// ---------------------------------------------------------------------------
// Properties over randomized step functions

TEST(StepFunctionProperties, IntegralIsLinear) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const auto f = oracle::random_dyadic_step(rng, u(rng), 3, 2);
    const auto g = oracle::random_dyadic_step(rng, u(rng), 2, 3);
    const double lo = u(rng);
    const auto e = IntervalSet({{lo, lo + 1.7}, {lo + 2.0, lo + 2.5}});
    const double lhs = integrate(add(f, g), e);
    const double rhs = integrate(f, e) + integrate(g, e);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::fabs(rhs)));
  }
}

TEST(StepFunctionProperties, TranslationPreservesNormsExactly) {
  std::mt19937_64 rng(102);
  for (int k = 0; k < 100; ++k) {
    const auto f = oracle::random_dyadic_step(rng, -1.0, 2, 3);
    const double b = std::ldexp(static_cast<double>(static_cast<int>(rng() % 64)) - 32.0, -3);
    for (double p : {1.5, 2.0, 3.0}) EXPECT_EQ(lp_norm(translate(f, b), p), lp_norm(f, p));
  }
}

TEST(StepFunctionProperties, DilationIsAnIsometry) {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> ua(-4.0, 4.0);
  for (int k = 0; k < 200; ++k) {
    const auto f = oracle::random_dyadic_step(rng, -1.0, 3, 2);
    const double a = ua(rng);
    for (double p : {1.5, 2.0, 3.0}) {
      const double n0 = lp_norm(f, p);
      EXPECT_NEAR(lp_norm(dilate(f, a, p), p), n0, 1e-12 * n0);
    }
  }
}

TEST(StepFunctionProperties, HolderInequality) {
  std::mt19937_64 rng(104);
  for (int k = 0; k < 200; ++k) {
    const auto f = oracle::random_dyadic_step(rng, -1.0, 3, 2);
    const auto g = oracle::random_dyadic_step(rng, -0.5, 3, 3);
    for (double p : {1.25, 1.5, 2.0, 3.0, 6.0}) {
      const double q = p / (p - 1.0);
      EXPECT_LE(std::fabs(inner(f, g)), lp_norm(f, p) * lp_norm(g, q) * (1 + 1e-12));
    }
  }
}

TEST(StepFunctionProperties, DilationTranslationCommute) {
  // D_a T_b = T_{2^{-a} b} D_a, checked pointwise on a dense sample.
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const auto f = oracle::random_dyadic_step(rng, -1.0, 2, 2);
    const double a = u(rng);
    const double b = u(rng);
    const double p = 1.0 + std::fabs(u(rng));
    const auto lhs = dilate(translate(f, b), a, p);
    const auto rhs = translate(dilate(f, a, p), std::exp2(-a) * b);
    for (int i = 0; i < 997; ++i) {
      const double t = -12.0 + 24.0 * (i + 0.37) / 997.0;
      // Skip sample points within rounding distance of a breakpoint.
      bool near_break = false;
      for (double x : lhs.breakpoints()) near_break = near_break || std::fabs(x - t) < 1e-9;
      if (near_break) continue;
      EXPECT_NEAR(lhs(t), rhs(t), 1e-12 * std::max(1.0, std::fabs(lhs(t))));
    }
    EXPECT_LT(lp_distance(lhs, rhs, p), 1e-12);
  }
}
