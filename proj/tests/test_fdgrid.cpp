#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fdgrid.hpp"
#include "support.hpp"

using namespace snls;

namespace {

GridState sampled_mode(int nodes, int k) {
  GridState s(nodes);
  for (int n = 0; n < nodes; ++n) s.values[n] = std::sin(k * std::numbers::pi * s.node(n));
  return s;
}

double discrete_eigenvalue(int k, double h) {
  const double s = std::sin(k * std::numbers::pi * h / 2);
  return 4.0 / (h * h) * s * s;
}

}  // namespace

TEST(GridStateTest, NodesAndSpacing) {
  GridState s(63);
  EXPECT_DOUBLE_EQ(s.spacing, 1.0 / 64);
  EXPECT_DOUBLE_EQ(s.node(0), 1.0 / 64);
  EXPECT_DOUBLE_EQ(s.node(62), 63.0 / 64);
  GridState v(std::vector<std::complex<double>>(7));
  EXPECT_DOUBLE_EQ(v.spacing, 0.125);
}

TEST(DiscreteLaplacian, SineModesAreEigenvectors) {
  for (int k : {1, 3, 10}) {
    const auto s = sampled_mode(31, k);
    const auto lap = discrete_laplacian(s);
    const double mu = discrete_eigenvalue(k, s.spacing);
    for (int n = 0; n < 31; ++n) EXPECT_NEAR(std::abs(lap.values[n] + mu * s.values[n]), 0.0, 1e-9);
  }
}

TEST(DiscreteLaplacian, UsesZeroGhosts) {
  GridState s(3);
  s.values = {1.0, 0.0, 0.0};
  const auto lap = discrete_laplacian(s);
  EXPECT_DOUBLE_EQ(lap.values[0].real(), -2.0 / (0.25 * 0.25));
  EXPECT_DOUBLE_EQ(lap.values[1].real(), 1.0 / (0.25 * 0.25));
  EXPECT_DOUBLE_EQ(lap.values[2].real(), 0.0);
}

TEST(GridNormsTest, SineProfileClosedForms) {
  const auto s = sampled_mode(63, 1);
  const auto norms = grid_norms(s);
  const double h = s.spacing;
  EXPECT_NEAR(norms.charge, 0.5, 1e-15);
  // summation by parts: h sum |delta_+ u|^2 = -h sum conj(u) delta delta u
  EXPECT_NEAR(norms.gradient_sq, discrete_eigenvalue(1, h) * 0.5, 1e-12);
  EXPECT_NEAR(norms.l4_quartic, 3.0 / 8.0, 1e-15);
  EXPECT_NEAR(grid_energy(s, 1.0), 0.5 * norms.gradient_sq - 0.25 * 3.0 / 8.0, 1e-14);
  EXPECT_NEAR(grid_energy(s, -1.0), 0.5 * norms.gradient_sq + 0.25 * 3.0 / 8.0, 1e-14);
}

TEST(GridNormsTest, SummationByParts) {
  std::mt19937_64 rng(9);
  const auto s = testing_support::random_grid(40, rng);
  const auto lap = discrete_laplacian(s);
  double pairing = 0.0;
  for (int n = 0; n < 40; ++n) pairing -= s.spacing * std::real(std::conj(s.values[n]) * lap.values[n]);
  EXPECT_NEAR(grid_norms(s).gradient_sq, pairing, 1e-12 * pairing);
}
