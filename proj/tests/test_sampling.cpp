#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <framelab/sampling.hpp>

#include "oracles.hpp"

using namespace framelab;

namespace {

const RademacherSpec kTwoLevels{CoordinateVector{{0, 0.6}, {2, 0.8}}, 2};

std::vector<double> refinement_chain(double h0, int steps) {
  std::vector<double> out;
  for (int k = 0; k < steps; ++k) out.push_back(std::ldexp(h0, -k));
  return out;
}

}  // namespace

TEST(SamplingPlan, LatticePointsInsideTheWindow) {
  const SamplingPlan plan{0.25, 0.1, IntervalSet({{0.0, 1.0}, {2.0, 2.5}})};
  const auto s = plan.samples();
  const std::vector<double> expected{0.1, 0.35, 0.6, 0.85, 2.1, 2.35};
  ASSERT_EQ(s.size(), expected.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], expected[i], 1e-15);
  EXPECT_THROW((SamplingPlan{0.0, 0.0, IntervalSet::single(0.0, 1.0)}.samples()), std::invalid_argument);
  EXPECT_THROW((SamplingPlan{1.0, 0.0, IntervalSet::real_line()}.samples()), std::invalid_argument);
}

TEST(SampleFrame, UnitIndicatorAtMidpointsIsTheUnitFrame) {
  const auto g = require_generator(StepFunction::indicator(0.0, 1.0));
  const auto frame = sample_frame(g, covering_plan(g, 1.0, 6, 0.5), 6);
  ASSERT_EQ(frame.size(), 13u);
  for (std::size_t j = 0; j < frame.size(); ++j) {
    const auto n = static_cast<Index>(j) - 6;
    EXPECT_EQ(frame.pairs[j].x, CoordinateVector::unit(n));
    EXPECT_EQ(frame.pairs[j].f, CoordinateVector::unit(n));
  }
  EXPECT_EQ(reconstruction_residual(frame), 0.0);
}

TEST(SampleFrame, CommensurateLatticeIsExact) {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 8; ++k) {
    const RademacherSpec spec{oracle::random_unit_coefficients(rng, 1 + k % 4, 3), 1 + k % 2};
    const auto g = build_rademacher_generator(spec);
    const double h = std::ldexp(1.0, -(dyadic_depth(spec) + 1));
    for (double p : {1.5, 2.0, 3.0}) {
      EXPECT_LT(reconstruction_residual(sample_frame(g, covering_plan(g, h, 8), 8, p)), 1e-10);
    }
  }
}

TEST(SampleFrame, CommensurateLatticeMatchesContinuousSynthesis) {
  std::mt19937_64 rng(102);
  std::normal_distribution<double> normal;
  const auto g = build_rademacher_generator(kTwoLevels);
  const double h = std::ldexp(1.0, -dyadic_depth(kTwoLevels));
  const auto frame = sample_frame(g, covering_plan(g, h, 8), 8);
  for (int k = 0; k < 20; ++k) {
    CoordinateVector x;
    for (Index n = -8; n <= 8; ++n) x.set(n, normal(rng));
    const auto discrete = reconstruct(frame, x);
    const auto continuous = restricted(synthesis(g, x), -8, 8);
    EXPECT_LT(sup_norm(discrete - continuous), 1e-10);
  }
}

TEST(SampleFrame, IncommensurateLatticeHasVisibleError) {
  const auto g = build_rademacher_generator(kTwoLevels);
  const auto rows = sampling_sweep(g, {0.3, 0.15, 0.075}, 8);
  for (const auto& row : rows) {
    EXPECT_GT(row.max_error, 1e-3);
    EXPECT_FALSE(row.exact);
  }
  EXPECT_LT(rows[2].max_error, rows[0].max_error);
}

TEST(SampleFrame, CommensurateLatticeInheritsTheSuppressionBound) {
  // On an aligned lattice a subset of samples is the synthesis over a union of cells.
  std::mt19937_64 rng(103);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 6; ++k) {
    const RademacherSpec spec{oracle::random_unit_coefficients(rng, 1 + k % 3, 3), 1};
    const auto g = build_rademacher_generator(spec);
    for (int extra : {0, 1}) {
      const double h = std::ldexp(1.0, -dyadic_depth(spec) - extra);
      for (double p : {1.5, 2.0, 3.0}) {
        const auto frame = sample_frame(g, covering_plan(g, h, 6), 6, p);
        for (int t = 0; t < 20; ++t) {
          IndexSet s;
          for (std::size_t j = 0; j < frame.size(); ++j) {
            if (rng() % 2) s.push_back(j);
          }
          CoordinateVector x;
          for (Index n = -6; n <= 6; ++n) x.set(n, normal(rng));
          EXPECT_LE(norm(partial_sum(frame, x, s), p), g.suppression_constant() * norm(x, p) + 1e-8);
        }
      }
    }
  }
}

TEST(SamplingSweep, EmptyListGivesEmptyTable) {
  const auto g = build_rademacher_generator(kTwoLevels);
  EXPECT_TRUE(sampling_sweep(g, {}, 4).empty());
}

TEST(SamplingSweep, CommensurateRowsAreFlaggedExact) {
  const auto g = build_rademacher_generator(kTwoLevels);
  const int d = dyadic_depth(kTwoLevels);
  const auto rows = sampling_sweep(g, {std::ldexp(1.0, -d), std::ldexp(1.0, -d - 1), 0.3}, 6);
  EXPECT_TRUE(rows[0].exact);
  EXPECT_TRUE(rows[1].exact);
  EXPECT_FALSE(rows[2].exact);
  EXPECT_EQ(rows[1].num_samples, 2 * rows[0].num_samples);
}

TEST(SamplingSweep, EqualCoefficientSweepsAreNonincreasing) {
  for (int count : {2, 3, 4, 8}) {
    CoordinateVector a;
    for (Index n = 0; n < count; ++n) a.set(n, 1.0 / std::sqrt(static_cast<double>(count)));
    const RademacherSpec spec{a, 1};
    const auto g = build_rademacher_generator(spec);
    const auto rows = sampling_sweep(g, refinement_chain(1.0, dyadic_depth(spec) + 2), 8);
    EXPECT_TRUE(rows.back().exact);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      // Rows below the exactness threshold differ only by rounding.
      if (rows[i - 1].exact) {
        EXPECT_TRUE(rows[i].exact) << "count=" << count << " h=" << rows[i].h;
      } else {
        EXPECT_LE(rows[i].max_error, rows[i - 1].max_error * (1 + 1e-12)) << "count=" << count << " h=" << rows[i].h;
      }
    }
  }
}

TEST(SamplingSweep, RefinementCanIncreaseTheError) {
  // Halving h averages the old lattice with its midpoint shift, which need not help.
  const RademacherSpec spec{
      CoordinateVector{{-3, 0.1334448820063274}, {0, 0.92450063241629199}, {3, -0.35705888047798745}}, 3};
  const auto g = build_rademacher_generator(spec);
  const auto rows = sampling_sweep(g, refinement_chain(1.0, 5), 6);
  EXPECT_NEAR(rows[2].max_error, 0.3, 1e-3);
  EXPECT_NEAR(rows[3].max_error, 0.4668, 1e-3);
  EXPECT_GT(rows[3].max_error, rows[2].max_error);
  EXPECT_TRUE(rows[4].exact);
}
