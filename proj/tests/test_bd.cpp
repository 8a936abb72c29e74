#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slabewald/bd.hpp"
#include "slabewald/errors.hpp"

using namespace slabewald;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Steric, PiecewiseForceAndEnergy) {
  StericParams s{1.0, 0.7, 1.5, 6.0};
  const double rc = s.cutoff();
  EXPECT_NEAR(rc, std::pow(2.0, 1.0 / 6.0) * 2.0, 1e-15);
  EXPECT_EQ(steric_force(rc * 1.001, s), 0.0);
  EXPECT_NEAR(steric_energy(rc, s), 0.0, 1e-14);
  EXPECT_NEAR(steric_force(rc, s), 0.0, 1e-12);
  // constant force below r_m, energy linear there and continuous at r_m
  EXPECT_EQ(steric_force(0.3, s), steric_force(1.5, s));
  EXPECT_NEAR(steric_energy(1.5 - 1e-12, s), steric_energy(1.5 + 1e-12, s), 3e-12 * steric_force(1.5, s) + 1e-13);
  EXPECT_GT(steric_force(1.8, s), 0.0);
  for (double r : {0.5, 1.6, 2.0, 2.2}) {
    double h = 1e-6;
    double fd = -(steric_energy(r + h, s) - steric_energy(r - h, s)) / (2 * h);
    EXPECT_NEAR(steric_force(r, s), fd, 1e-6 * std::max(1.0, std::abs(fd))) << r;
  }
}

TEST(Steric, PairForcesAreEqualAndOpposite) {
  BdBox box{10, 10, 10, true, 0, 10, false};
  StericParams s{1.0, 1.0, 1.0, 2.0};
  ChargeSet c;
  c.add(0.2, 5.0, 5.0, 1.0);
  c.add(9.0, 5.3, 5.1, -1.0);  // 1.2 apart through the periodic boundary
  std::vector<std::array<double, 3>> F;
  steric_forces(c, box, s, F);
  double r = std::sqrt(1.2 * 1.2 + 0.3 * 0.3 + 0.1 * 0.1);
  double f = steric_force(r, s);
  EXPECT_NEAR(F[0][0], f * 1.2 / r, 1e-12);
  for (int d = 0; d < 3; ++d) EXPECT_NEAR(F[0][d] + F[1][d], 0.0, 1e-14);
}

TEST(Steric, WallMirrorRepulsion) {
  BdBox box{10, 10, 10, false, 0.5, 9.5, true};
  StericParams s{1.0, 1.0, 1.0, 2.0};
  ChargeSet c;
  c.add(5, 5, 0.8, 1.0);
  c.add(2, 2, 9.1, -1.0);
  std::vector<std::array<double, 3>> F;
  steric_forces(c, box, s, F);
  EXPECT_NEAR(F[0][2], steric_force(1.6, s), 1e-12);
  EXPECT_NEAR(F[1][2], -steric_force(1.8, s), 1e-12);
}

TEST(Integrator, DriftIsExactWithoutNoise) {
  BdBox box{10, 10, 10, true, 0, 10, false};
  StericParams s{1.0, 0.0, 1.0, 2.0};
  BdConfig cfg;
  cfg.dt = 0.01;
  cfg.mu = 2.0;
  cfg.kT = 0.0;
  cfg.max_disp = 0.0;
  BdIntegrator bd(box, s, cfg);
  ChargeSet c;
  c.add(1.0, 2.0, 3.0, 1.0);
  auto force = [](const ChargeSet&, std::vector<std::array<double, 3>>& F) { F[0] = {1.0, -2.0, 0.5}; };
  for (int k = 0; k < 10; ++k) bd.step(c, force);
  EXPECT_NEAR(c.x[0], 1.0 + 10 * 0.02 * 1.0, 1e-14);
  EXPECT_NEAR(c.y[0], 2.0 - 10 * 0.02 * 2.0, 1e-14);
  EXPECT_NEAR(c.z[0], 3.0 + 10 * 0.02 * 0.5, 1e-14);
  // no force, no noise: no motion
  ChargeSet d = c;
  bd.step(d, nullptr);
  EXPECT_EQ(d.x, c.x);
  EXPECT_EQ(d.z, c.z);
}

TEST(Integrator, FreeDiffusionMeanSquareDisplacement) {
  const double L = 1e6;
  BdBox box{L, L, L, true, 0, L, false};
  StericParams s{1.0, 0.0, 1.0, 2.0};
  BdConfig cfg;
  cfg.dt = 0.01;
  cfg.kT = 1.5;
  cfg.mu = 0.8;
  cfg.seed = 99;
  cfg.max_disp = 0.0;
  BdIntegrator bd(box, s, cfg);
  const std::size_t n = 4000;
  ChargeSet c;
  for (std::size_t i = 0; i < n; ++i) c.add(L / 2, L / 2, L / 2, 1.0);
  const int steps = 50;
  for (int k = 0; k < steps; ++k) bd.step(c, nullptr);
  double msd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = c.x[i] - L / 2, dy = c.y[i] - L / 2, dz = c.z[i] - L / 2;
    msd += dx * dx + dy * dy + dz * dz;
  }
  msd /= 3.0 * n;
  // 2 D t with D = mu kT; the averaged increments only change the two end terms
  const double expect = 2.0 * cfg.mu * cfg.kT * cfg.dt * steps;
  EXPECT_NEAR(msd, expect, 0.05 * expect);
}

TEST(Integrator, SameSeedSameTrajectory) {
  BdBox box{8, 8, 8, false, 0.5, 7.5, true};
  StericParams s{0.5, 1.0, 0.5, 2.0};
  BdConfig cfg;
  cfg.dt = 1e-3;
  cfg.seed = 5;
  std::mt19937_64 rng(1);
  auto c0 = random_ions(20, 20, box, 1.0, 7.0, rng);
  auto run = [&] {
    BdIntegrator bd(box, s, cfg);
    auto c = c0;
    for (int k = 0; k < 20; ++k) bd.step(c, nullptr);
    return c;
  };
  auto a = run(), b = run();
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.z, b.z);
  cfg.seed = 6;
  auto d = run();
  EXPECT_NE(a.x, d.x);
}

TEST(Integrator, RejectedStepsAreRetried) {
  // Particles pinned next to the lower boundary: most draws leave the band.
  BdBox box{10, 10, 10, false, 1.0, 9.0, false};
  StericParams s{1.0, 0.0, 1.0, 2.0};
  BdConfig cfg;
  cfg.dt = 0.01;
  cfg.seed = 3;
  BdIntegrator bd(box, s, cfg);
  ChargeSet c;
  for (int i = 0; i < 3; ++i) c.add(2 * i, 5, 1.0 + 1e-9, 1.0);
  int retried = bd.step(c, nullptr);
  EXPECT_GT(retried, 0);
  EXPECT_EQ(bd.total_retries(), retried);
  for (double z : c.z) EXPECT_GT(z, 1.0);
  cfg.max_retries = 0;
  BdIntegrator strict(box, s, cfg);
  ChargeSet stuck;
  stuck.add(5, 5, 1.0 + 1e-12, 1.0);
  auto push_out = [](const ChargeSet&, std::vector<std::array<double, 3>>& F) { F[0] = {0, 0, -100.0}; };
  EXPECT_THROW(strict.step(stuck, push_out), NumericalError);
}

TEST(Observables, DensityAndPairNormalization) {
  BdBox box{6, 6, 6, true, 0, 6, false};
  BdObservables obs(box, 0.5, 0.1, 2.5);
  std::mt19937_64 rng(12);
  const int samples = 200;
  for (int k = 0; k < samples; ++k) obs.sample(random_ions(150, 150, box, 0.0, 6.0, rng));
  double total = 0.0;
  for (double v : obs.density()) total += v * 0.5 * 36.0;
  EXPECT_NEAR(total, 300.0, 1e-9);
  // uncorrelated positions: g2 = 1 up to noise
  auto gl = obs.g2_like(), gu = obs.g2_unlike();
  double ml = 0, mu = 0;
  for (std::size_t b = 10; b < gl.size(); ++b) {
    ml += gl[b];
    mu += gu[b];
  }
  ml /= double(gl.size() - 10);
  mu /= double(gu.size() - 10);
  EXPECT_NEAR(ml, 1.0, 0.01);
  EXPECT_NEAR(mu, 1.0, 0.01);
}

TEST(Units, BjerrumAndDebyeLengths) {
  // water at 298 K: Bjerrum length about 7.14 A; 0.05 M salt: Debye length about 13.6 A
  const double lb = bjerrum_length_angstrom(78.5, 298.0);
  EXPECT_NEAR(lb, 7.14, 0.01);
  const double a = 2.125;
  const double eps = reduced_permittivity(lb / a);
  const double n = molar_to_density(0.05, a);
  EXPECT_NEAR(n, 0.05 * 1e3 * kAvogadro * std::pow(a * 1e-10, 3), 1e-18);
  const double lambda = debye_length(eps, 1.0, n);
  EXPECT_NEAR(lambda * a, 13.6, 0.05);
  // lambda^2 = 1 / (8 pi lB n)
  EXPECT_NEAR(lambda * lambda, 1.0 / (8.0 * kPi * (lb / a) * n), 1e-10 * lambda * lambda);
}

TEST(Pnp, ClosedFormAndNormalization) {
  // Charged-wall system in ion radii: a = 2 A, eps_r = 78.5, L = 800, H = 100.
  const double eps = reduced_permittivity(bjerrum_length_angstrom(78.5, 298.0) / 2.0);
  const double L = 800.0, H = 100.0;
  const std::size_t N = 6140;
  const double sigma = -double(N) / (2.0 * L * L);
  auto p = pnp_profile(sigma, eps, 1.0, H, 1.0);
  EXPECT_GT(p.K, 0.0);
  EXPECT_LT(p.K, kPi);
  EXPECT_NEAR(p.K * std::tan(0.5 * p.K), -sigma * p.d / (2.0 * eps), 1e-12);
  EXPECT_NEAR(p.n_m, 3.26e-5, 0.005e-5);
  EXPECT_NEAR(p.integral(0.0, H) * L * L, double(N), 1e-8 * N);
  EXPECT_NEAR(p(0.5 * H), p.n_m, 1e-18);
  EXPECT_EQ(p(0.5), 0.0);
  EXPECT_THROW(pnp_profile(0.1, eps, 1.0, H, 1.0), InputError);
}

TEST(Pnp, RejectionSamplerFollowsProfile) {
  const double eps = 0.02, H = 20.0;
  auto p = pnp_profile(-0.02, eps, 1.0, H, 1.0);
  BdBox box{10, 10, H, false, 1.0, H - 1.0, false};
  std::mt19937_64 rng(4);
  auto c = pnp_ions(40000, box, p, rng);
  // fraction of ions within 3 of either wall
  std::size_t near = 0;
  for (double z : c.z) near += (z < 4.0 || z > H - 4.0);
  double expect = 2.0 * p.integral(0.0, 4.0) / p.integral(0.0, H);
  EXPECT_NEAR(double(near) / c.size(), expect, 0.01);
}

TEST(Dho, LimitsOfThePairCorrelation) {
  StericParams s{1.0, 0.7, 1.5, 6.0};
  const double eps = 0.01, g_w = 0.25, lambda = 6.4;
  // beyond the steric cutoff like pairs are depleted, unlike pairs enhanced
  EXPECT_LT(dho_pair_correlation(3.0, +1, eps, 1.0, g_w, lambda, s), 1.0);
  EXPECT_GT(dho_pair_correlation(3.0, -1, eps, 1.0, g_w, lambda, s), 1.0);
  EXPECT_NEAR(dho_pair_correlation(500.0, +1, eps, 1.0, g_w, lambda, s), 1.0, 1e-12);
}
