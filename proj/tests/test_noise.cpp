#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "errors.hpp"
#include "noise.hpp"

using namespace snls;

TEST(Covariance, WeightsFollowPowerLaw) {
  const auto spec = build_covariance(10, 2.5);
  ASSERT_EQ(spec.num_modes, 10);
  ASSERT_EQ(spec.weights.size(), 10u);
  EXPECT_DOUBLE_EQ(spec.intensity, 2.5);
  for (int k = 1; k <= 10; ++k) EXPECT_NEAR(spec.weights[k - 1], 1.0 / (1.0 + std::pow(k, 2.6)), 1e-15);
  EXPECT_DOUBLE_EQ(spec.weights[0], 0.5);
}

TEST(Covariance, RejectsBadArguments) {
  EXPECT_THROW(build_covariance(0, 1.0), InvalidArgument);
  EXPECT_THROW(build_covariance(4, -1.0), InvalidArgument);
  EXPECT_THROW(build_covariance(4, std::nan("")), InvalidArgument);
  EXPECT_NO_THROW(build_covariance(1, 0.0));
}

TEST(Covariance, TruncateKeepsLeadingWeights) {
  const auto full = build_covariance(16, 3.0);
  const auto cut = truncate_covariance(full, 5);
  ASSERT_EQ(cut.num_modes, 5);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(cut.weights[k], full.weights[k]);
  EXPECT_EQ(cut.intensity, 3.0);
  EXPECT_THROW(truncate_covariance(full, 0), InvalidArgument);
}

TEST(Covariance, H2TraceSumsWeightedEigenvalues) {
  const auto spec = build_covariance(6, 1.0);
  double expected = 0.0;
  for (int k = 1; k <= 6; ++k) {
    const double q = 1.0 / (1.0 + std::pow(k, 2.6));
    expected += q * q * std::pow(k * std::numbers::pi, 4);
  }
  EXPECT_NEAR(h2_trace(spec), expected, 1e-12 * expected);
}

TEST(CounterGaussian, DependsOnlyOnKey) {
  EXPECT_EQ(counter_gaussian(7, 1, 2, 3), counter_gaussian(7, 1, 2, 3));
  EXPECT_NE(counter_gaussian(7, 1, 2, 3), counter_gaussian(7, 1, 2, 4));
  EXPECT_NE(counter_gaussian(7, 1, 2, 3), counter_gaussian(8, 1, 2, 3));
  EXPECT_NE(counter_gaussian(7, 1, 2, 3), counter_gaussian(7, 2, 2, 3));
}

TEST(CounterGaussian, MomentsMatchStandardNormal) {
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = counter_gaussian(42, 0, i / 16, i % 16);
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  const double mean = s1 / n, var = s2 / n - mean * mean, kurt = s4 / n;
  // 5 sigma bands: sd(mean)=1/sqrt(n), sd(var)~sqrt(2/n), sd(m4)~sqrt(96/n)
  EXPECT_NEAR(mean, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(var, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(kurt, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(NoisePathSampling, IncrementsHaveVarianceDt) {
  const auto spec = build_covariance(8, 1.0);
  const auto path = sample_path(spec, 2.0, 4096, 11);
  EXPECT_EQ(path.num_steps(), 4096);
  EXPECT_EQ(path.num_modes(), 8);
  EXPECT_DOUBLE_EQ(path.dt(), 2.0 / 4096);
  EXPECT_DOUBLE_EQ(path.horizon(), 2.0);
  const int n = 4096 * 8;
  double s2 = 0;
  for (double v : path.increments()) s2 += v * v;
  EXPECT_NEAR(s2 / n / path.dt(), 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(NoisePathSampling, SeedAndTrajectorySelectPath) {
  const auto spec = build_covariance(4, 1.0);
  const auto a = sample_path(spec, 1.0, 32, 5, 0);
  const auto b = sample_path(spec, 1.0, 32, 5, 0);
  const auto c = sample_path(spec, 1.0, 32, 5, 1);
  const auto d = sample_path(spec, 1.0, 32, 6, 0);
  EXPECT_EQ(a.increments(), b.increments());
  EXPECT_NE(a.increments(), c.increments());
  EXPECT_NE(a.increments(), d.increments());
}

TEST(NoisePathSampling, PathIsPrefixStableAcrossModeCounts) {
  // a draw is keyed on (step, mode), so adding modes leaves the first ones alone
  const auto small = sample_path(build_covariance(3, 1.0), 1.0, 16, 9);
  const auto large = sample_path(build_covariance(12, 1.0), 1.0, 16, 9);
  for (int m = 0; m < 16; ++m)
    for (int k = 0; k < 3; ++k) EXPECT_EQ(small.increment(m, k), large.increment(m, k));
}

TEST(NoisePathSampling, ValuesSitOnLattice) {
  const auto path = sample_path(build_covariance(5, 1.0), 1.0, 64, 3);
  for (double v : path.increments()) {
    const double scaled = std::ldexp(v, 40);
    EXPECT_EQ(scaled, std::nearbyint(scaled));
  }
  EXPECT_EQ(quantize_increment(0.1), std::nearbyint(std::ldexp(0.1, 40)) / std::ldexp(1.0, 40));
}

TEST(NoisePathSampling, RejectsBadArguments) {
  const auto spec = build_covariance(2, 1.0);
  EXPECT_THROW(sample_path(spec, 0.0, 8, 1), InvalidArgument);
  EXPECT_THROW(sample_path(spec, 1.0, 0, 1), InvalidArgument);
  EXPECT_THROW(NoisePath(0.1, 2, 2, {1.0, 2.0}), InvalidArgument);
  EXPECT_NO_THROW(NoisePath(1.0, 0, 3, {}));
}

TEST(Coarsening, SumsBlocks) {
  const auto fine = sample_path(build_covariance(3, 1.0), 1.0, 12, 2);
  const auto coarse = coarsen_path(fine, 4);
  ASSERT_EQ(coarse.num_steps(), 3);
  EXPECT_DOUBLE_EQ(coarse.dt(), 4 * fine.dt());
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 3; ++k) {
      double s = 0;
      for (int j = 0; j < 4; ++j) s += fine.increment(4 * m + j, k);
      EXPECT_EQ(coarse.increment(m, k), s);
    }
}

TEST(Coarsening, IsAssociativeAndPreservesTotalsExactly) {
  const auto fine = sample_path(build_covariance(6, 1.0), 1.0, 1024, 77);
  const auto direct = coarsen_path(fine, 16);
  const auto nested = coarsen_path(coarsen_path(fine, 4), 4);
  EXPECT_EQ(direct.increments(), nested.increments());
  const auto total = coarsen_path(fine, 1024);
  const auto total_nested = coarsen_path(coarsen_path(coarsen_path(fine, 8), 8), 16);
  EXPECT_EQ(total.increments(), total_nested.increments());
  EXPECT_EQ(coarsen_path(fine, 1).increments(), fine.increments());
}

TEST(Coarsening, RejectsNonDivisibleFactor) {
  const auto fine = sample_path(build_covariance(2, 1.0), 1.0, 10, 2);
  EXPECT_THROW(coarsen_path(fine, 3), InvalidArgument);
  EXPECT_THROW(coarsen_path(fine, 0), InvalidArgument);
  try {
    coarsen_path(fine, 4);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("10"), std::string::npos);
  }
}

TEST(IncrementOnPoints, MatchesSeriesAndVanishesAtBoundary) {
  const auto spec = build_covariance(5, 3.0);
  const auto path = sample_path(spec, 1.0, 4, 8);
  const std::vector<double> xs = {0.0, 0.1, 0.37, 0.5, 0.93, 1.0};
  const auto values = increment_on_points(spec, path, 2, xs);
  ASSERT_EQ(values.size(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double expected = 0.0;
    for (int k = 1; k <= 5; ++k)
      expected += 3.0 / (1.0 + std::pow(k, 2.6)) * std::numbers::sqrt2 *
                  std::sin(k * std::numbers::pi * xs[i]) * path.increment(2, k - 1);
    EXPECT_NEAR(values[i], expected, 1e-15);
  }
  EXPECT_EQ(values.front(), 0.0);
  EXPECT_EQ(values.back(), 0.0);
}

TEST(IncrementOnPoints, RejectsBadArguments) {
  const auto spec = build_covariance(3, 1.0);
  const auto path = sample_path(spec, 1.0, 4, 8);
  const std::vector<double> ok = {0.5};
  const std::vector<double> outside = {1.5};
  EXPECT_THROW(increment_on_points(spec, path, 4, ok), InvalidArgument);
  EXPECT_THROW(increment_on_points(spec, path, -1, ok), InvalidArgument);
  EXPECT_THROW(increment_on_points(spec, path, 0, outside), InvalidArgument);
  EXPECT_THROW(increment_on_points(build_covariance(4, 1.0), path, 0, ok), InvalidArgument);
}

TEST(IncrementOnPoints, ZeroIntensityGivesZero) {
  const auto spec = build_covariance(3, 0.0);
  const auto path = sample_path(spec, 1.0, 4, 8);
  const std::vector<double> xs = {0.2, 0.7};
  for (double v : increment_on_points(spec, path, 1, xs)) EXPECT_EQ(v, 0.0);
}
