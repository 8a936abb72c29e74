#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "slabewald/errors.hpp"
#include "slabewald/slab_solver.hpp"

using namespace slabewald;

namespace {
constexpr double kPi = std::numbers::pi;

ChargeSet random_neutral(std::size_t n, const SlabGeometry& g, double margin, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ChargeSet c;
  for (std::size_t i = 0; i < n; ++i)
    c.add(g.Lx * u(rng), g.Ly * u(rng), margin + (g.H - 2 * margin) * u(rng), i % 2 ? -1.0 : 1.0);
  return c;
}
}  // namespace

TEST(NearField, MatchesBruteForceSum) {
  SlabGeometry g{1.5, 1.5, 0.8, 1.0, 1.0, 1.0};
  auto p = plan_grid_xi(g, 0.02, 5e-4, 6.0);
  auto c = random_neutral(60, g, 0.05, 4);
  std::vector<double> phi(c.size(), 0.0);
  std::vector<std::array<double, 3>> E(c.size(), {0, 0, 0});
  near_field_sum(c, g, p, false, phi, E);
  for (std::size_t i = 0; i < c.size(); ++i) {
    double ph = c.q[i] * near_potential_avg(0.0, p.g_w, p.xi, g.eps);
    std::array<double, 3> e{0, 0, 0};
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j == i) continue;
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
          double dx = c.x[i] - c.x[j] + a * g.Lx, dy = c.y[i] - c.y[j] + b * g.Ly, dz = c.z[i] - c.z[j];
          double r = std::sqrt(dx * dx + dy * dy + dz * dz);
          if (r > p.r_cut) continue;
          ph += c.q[j] * near_potential_avg(r, p.g_w, p.xi, g.eps);
          double f = c.q[j] * near_field_avg(r, p.g_w, p.xi, g.eps) / r;
          e[0] += f * dx;
          e[1] += f * dy;
          e[2] += f * dz;
        }
    }
    EXPECT_NEAR(phi[i], ph, 1e-13 * std::abs(ph) + 1e-13);
    for (int d = 0; d < 3; ++d) EXPECT_NEAR(E[i][d], e[d], 1e-12 * (std::abs(e[d]) + 1.0));
  }
}

TEST(NearField, ImagesEnterWithReflectionFactor) {
  SlabGeometry g{2, 2, 1, 1.0, 0.25, 1.0};
  auto p = plan_grid_xi(g, 0.01, 5e-4, 6.0);
  ChargeSet c;
  c.add(1.0, 1.0, 0.04, 1.0);
  std::vector<double> phi(1, 0.0);
  std::vector<std::array<double, 3>> E(1, {0, 0, 0});
  near_field_sum(c, g, p, false, phi, E);
  const double R = (1.0 - 0.25) / 1.25;
  double ph = near_potential_avg(0.0, p.g_w, p.xi, 1.0) + R * near_potential_avg(0.08, p.g_w, p.xi, 1.0);
  EXPECT_NEAR(phi[0], ph, 1e-14);
  EXPECT_NEAR(E[0][2], R * near_field_avg(0.08, p.g_w, p.xi, 1.0), 1e-12);
  EXPECT_EQ(E[0][0], 0.0);
}

class PlaneTransform : public ::testing::TestWithParam<std::tuple<double, double, double>> {};

TEST_P(PlaneTransform, MatchesHankelQuadrature) {
  auto [g_w, k, d] = GetParam();
  const double xi = 5.0, eps = 1.3;
  const double s2 = std::sqrt(g_w * g_w + 0.5 / (xi * xi));
  auto f = [&](double rho) {
    double r = std::sqrt(rho * rho + d * d);
    return 2 * kPi * rho * boost::math::cyl_bessel_j(0, k * rho) * near_potential_point(r, g_w, xi, eps);
  };
  double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 14 * s2, 25, 1e-14);
  double got = near_kernel_plane_transform(k, d, g_w, xi, eps);
  EXPECT_NEAR(got, ref, 1e-11 * std::max(1e-3, std::abs(ref))) << g_w << " " << k << " " << d;
}

INSTANTIATE_TEST_SUITE_P(Cases, PlaneTransform,
                         ::testing::Values(std::make_tuple(0.02, 0.0, 0.0), std::make_tuple(0.02, 0.0, 0.1),
                                           std::make_tuple(0.02, 0.5, 0.03), std::make_tuple(0.02, 10.0, 0.2),
                                           std::make_tuple(0.02, 40.0, 0.0), std::make_tuple(0.0, 3.0, 0.05),
                                           std::make_tuple(0.1, 25.0, 0.4)));

TEST(SlabSolver, EmptyChargesGiveZeroEnergy) {
  SlabGeometry g{2, 2, 0.75, 1, 0.05, 0.02};
  auto p = plan_grid_xi(g, 0.025, 5e-4, 9.2);
  SolverOptions o;
  o.compute_energy = true;
  SlabSolver s(g, p, o);
  ChargeSet c;
  auto r = s.solve(c);
  EXPECT_TRUE(r.has_energy);
  EXPECT_EQ(r.U, 0.0);
  EXPECT_TRUE(r.phi_bar.empty());
}

TEST(SlabSolver, RejectsBadInput) {
  SlabGeometry g{2, 2, 0.75, 1, 0.05, 0.02};
  auto p = plan_grid_xi(g, 0.025, 5e-4, 9.2);
  SlabSolver s(g, p);
  ChargeSet c;
  c.add(1, 1, 0.4, 1.0);
  EXPECT_THROW(s.solve(c), InputError);  // not neutral
  c.add(1.5, 1, 0.001, -1.0);
  EXPECT_THROW(s.solve(c), InputError);  // Gaussian crosses the wall
  auto bad = plan_grid_xi(g, 0.025, 5e-4, 26.0);
  SlabSolver sb(g, bad);
  ChargeSet ok;
  ok.add(1, 1, 0.4, 1.0);
  ok.add(0.5, 1, 0.3, -1.0);
  EXPECT_THROW(sb.solve(ok), ConstraintError);
  SolverOptions loose;
  loose.enforce_constraints = false;
  SlabSolver sl(g, bad, loose);
  EXPECT_NO_THROW(sl.solve(ok));
}

TEST(SlabSolver, LateralForcesSumToZero) {
  // Walls only push along z; the xy components of the total force vanish.
  SlabGeometry g{2, 2, 0.75, 1, 0.05, 0.02};
  auto p = plan_grid_xi(g, 0.025, 5e-4, 9.2);
  SlabSolver s(g, p);
  auto c = random_neutral(40, g, 0.11, 21);
  auto r = s.solve(c);
  double fx = 0, fy = 0, scale = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    fx += c.q[i] * r.E_bar[i][0];
    fy += c.q[i] * r.E_bar[i][1];
    scale += std::abs(c.q[i]) * std::hypot(r.E_bar[i][0], r.E_bar[i][1]);
  }
  EXPECT_LT(std::abs(fx), 1e-3 * scale);
  EXPECT_LT(std::abs(fy), 1e-3 * scale);
}

TEST(SlabSolver, EnergyIsHalfSumOfChargePotential) {
  SlabGeometry g{2, 2, 1.0, 1, 0.5, 0.2};
  auto p = plan_grid_xi(g, 0.02, 5e-4, 6.0);
  SolverOptions o;
  o.compute_energy = true;
  SlabSolver s(g, p, o);
  auto c = random_neutral(10, g, 0.1, 2);
  auto r = s.solve(c);
  double U = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) U += 0.5 * c.q[i] * r.phi_bar[i];
  EXPECT_NEAR(r.U, U, 1e-12 * std::abs(U));
  EXPECT_LT(r.diag.ai_discrepancy, 1e-3);
}

TEST(SlabSolver, UniformPotentialShiftKeepsFields) {
  // Adding a uniform neutral wall-charge pair changes the field by the
  // capacitor field sigma/eps along -z for every charge.
  SlabGeometry g{2, 2, 1.0, 1.0, 1.0, 1.0};
  auto p = plan_grid_xi(g, 0.02, 5e-4, 6.0);
  SlabSolver s(g, p);
  auto c = random_neutral(10, g, 0.1, 8);
  auto c2 = c;
  auto r0 = s.solve(c);
  const double sig = 0.05;
  auto r1 = s.solve(c2, SurfaceCharge::constant(-sig), SurfaceCharge::constant(sig));
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(r1.E_bar[i][0], r0.E_bar[i][0], 1e-10);
    // the truncated window integrates a constant to within the profile tolerance
    EXPECT_NEAR(r1.E_bar[i][2] - r0.E_bar[i][2], -sig / g.eps, p.delta * sig / g.eps);
  }
}
