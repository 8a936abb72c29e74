#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slabewald/oracles.hpp"
#include "slabewald/triply_periodic.hpp"

using namespace slabewald;

namespace {
constexpr double kPi = std::numbers::pi;

double avg_kernel(double r, double g_w, double eps) { return std::erf(r / (2 * g_w)) / (4 * kPi * eps * r); }

ChargeSet random_neutral(std::size_t n, double L, double zlo, double zhi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ChargeSet c;
  for (std::size_t i = 0; i < n; ++i) c.add(L * u(rng), L * u(rng), zlo + (zhi - zlo) * u(rng), i % 2 ? -1.0 : 1.0);
  return c;
}
}  // namespace

TEST(ImageSeries, SingleWallHasOneImage) {
  SlabGeometry g{1, 1, 2.0, 1.0, 0.25, 1.0};
  auto imgs = slab_image_series(0.3, g, 400);
  ASSERT_EQ(imgs.size(), 1u);
  EXPECT_DOUBLE_EQ(imgs[0].z, -0.3);
  EXPECT_DOUBLE_EQ(imgs[0].factor, 0.75 / 1.25);
  SlabGeometry top{1, 1, 2.0, 1.0, 1.0, 4.0};
  auto it = slab_image_series(0.3, top, 400);
  ASSERT_EQ(it.size(), 1u);
  EXPECT_DOUBLE_EQ(it[0].z, 3.7);
  EXPECT_DOUBLE_EQ(it[0].factor, -3.0 / 5.0);
  SlabGeometry none{1, 1, 2.0, 1.0, 1.0, 1.0};
  EXPECT_TRUE(slab_image_series(0.3, none, 400).empty());
}

TEST(ImageSeries, TwoWallsFirstGenerations) {
  SlabGeometry g{1, 1, 1.0, 1.0, 0.5, 0.2};
  const double rb = 0.5 / 1.5, rt = 0.8 / 1.2, z = 0.3;
  auto imgs = slab_image_series(z, g, 400);
  EXPECT_EQ(imgs.size(), 400u);
  auto find = [&](double zi) {
    for (const auto& t : imgs)
      if (std::abs(t.z - zi) < 1e-12) return t.factor;
    return 0.0;
  };
  EXPECT_NEAR(find(-z), rb, 1e-15);             // bottom mirror
  EXPECT_NEAR(find(2.0 - z), rt, 1e-15);        // top mirror
  EXPECT_NEAR(find(z + 2.0), rb * rt, 1e-15);   // bottom then top
  EXPECT_NEAR(find(z - 2.0), rb * rt, 1e-15);
  EXPECT_NEAR(find(-z - 2.0), rb * rb * rt, 1e-15);
}

TEST(FreeSpaceReference, ChargeNearSingleWall) {
  SlabGeometry g{1, 1, 5.0, 1.0, 0.2, 1.0};
  const double g_w = 0.05, R = 0.8 / 1.2, z = 0.4;
  ChargeSet c;
  c.add(0.0, 0.0, z, 2.0);
  auto f = free_space_slab_reference(c, g, g_w);
  double self = 2.0 / (4 * kPi * 2 * g_w) * (2.0 / std::sqrt(kPi));
  EXPECT_NEAR(f.phi[0], self + 2.0 * R * avg_kernel(2 * z, g_w, 1.0), 1e-14);
  // eps_b < eps: the image has the same sign and pushes the charge away from the wall
  double h = 1e-6;
  double dk = (avg_kernel(2 * z + h, g_w, 1.0) - avg_kernel(2 * z - h, g_w, 1.0)) / (2 * h);
  EXPECT_NEAR(f.E[0][2], -2.0 * R * dk, 1e-8);
  EXPECT_GT(f.E[0][2], 0.0);
}

TEST(NoSplitReference, GridRefinementConverged) {
  SlabGeometry g{1, 1, 0.5, 1.0, 0.2, 0.5};
  const double g_w = 0.04;
  auto c = random_neutral(6, 1.0, 0.1, 0.4, 3);
  NoSplitOptions coarse, fine;
  fine.h_factor = 1.5 * coarse.h_factor;
  auto a = no_split_reference(g, g_w, c, {}, {}, coarse);
  auto b = no_split_reference(g, g_w, c, {}, {}, fine);
  EXPECT_EQ(no_split_params(g, g_w, coarse).Nx, 40);
  EXPECT_EQ(no_split_params(g, g_w, fine).Nx, 60);
  double emax = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int d = 0; d < 3; ++d) {
      emax = std::max(emax, std::abs(b.E_bar[i][d]));
      diff = std::max(diff, std::abs(a.E_bar[i][d] - b.E_bar[i][d]));
    }
  EXPECT_LT(diff, 1e-7 * emax);
}

TEST(WorkCheck, DegenerateWhenNothingMoves) {
  SlabGeometry g{2, 2, 0.75, 1, 0.05, 0.02};
  auto p = plan_grid_xi(g, 0.025, 5e-4, 9.2);
  SlabSolver s(g, p);
  ChargeSet c;
  auto w = work_check(s, c, {}, {}, 1e-4, {});
  EXPECT_TRUE(w.degenerate);
  EXPECT_EQ(w.reldiff, 0.0);
  ChargeSet one;
  one.add(1, 1, 0.3, 1);
  one.add(0.5, 0.5, 0.4, -1);
  EXPECT_THROW(work_check(s, one, {}, {}, 1e-4, random_unit_directions(1, 2)), std::exception);
}

TEST(WorkCheck, UnitDirectionsAndExtrapolation) {
  auto d = random_unit_directions(50, 11);
  for (auto& v : d) EXPECT_NEAR(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], 1.0, 1e-14);
  EXPECT_EQ(d, random_unit_directions(50, 11));
  // v(L) = 3 + 2/L
  EXPECT_NEAR(extrapolate_inverse_length(28, 3 + 2.0 / 28, 32, 3 + 2.0 / 32), 3.0, 1e-14);
}

TEST(TriplyPeriodic, SpectralEwaldMatchesClassicalSum) {
  const double L = 4.0, eps = 0.7, g_w = 0.1;
  auto c = random_neutral(20, L, 0.0, L, 19);
  TriplyPeriodicEwald tp(L, eps, g_w, 3.0, 1e-4);
  std::vector<double> phi;
  std::vector<std::array<double, 3>> E;
  tp.compute(c, phi, E);
  auto ref = ewald_sum_gaussian(c, L, L, L, eps, g_w, 2.0, 16, 1);
  double mean = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int d = 0; d < 3; ++d) {
      mean += std::abs(ref.E[i][d]) / (3.0 * c.size());
      worst = std::max(worst, std::abs(E[i][d] - ref.E[i][d]));
    }
  EXPECT_LT(worst, 1e-4 * 5 * mean);
}

TEST(TriplyPeriodic, ClassicalSumIndependentOfAlpha) {
  const double L = 3.0, eps = 1.0, g_w = 0.15;
  auto c = random_neutral(8, L, 0.0, L, 23);
  auto a = ewald_sum_gaussian(c, L, L, L, eps, g_w, 2.5, 14, 1);
  auto b = ewald_sum_gaussian(c, L, L, L, eps, g_w, 3.5, 16, 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(a.phi[i], b.phi[i], 1e-12);
    for (int d = 0; d < 3; ++d) EXPECT_NEAR(a.E[i][d], b.E[i][d], 1e-12);
  }
}

TEST(TriplyPeriodic, PoissonSolveOfSingleMode) {
  const int n = 16;
  const double L = 2.0, eps = 3.0;
  std::vector<double> rho(n * n * n), phi(n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) rho[(i * n + j) * n + k] = std::sin(2 * kPi * i / n) * std::cos(4 * kPi * k / n);
  solve_triply_periodic(n, n, n, L, L, L, eps, rho.data(), phi.data());
  const double k2 = std::pow(2 * kPi / L, 2) + std::pow(4 * kPi / L, 2);
  for (std::size_t t = 0; t < rho.size(); ++t) EXPECT_NEAR(phi[t], rho[t] / (eps * k2), 1e-14);
}
