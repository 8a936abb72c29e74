#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "slabewald/errors.hpp"
#include "slabewald/kernels.hpp"

using namespace slabewald;

namespace {
constexpr double kPi = std::numbers::pi;

// Full smoothed Coulomb kernel of two Gaussians of width s each (pair width sqrt2 s).
double smoothed_coulomb(double r, double s, double eps) { return std::erf(r / (2.0 * s)) / (4.0 * kPi * eps * r); }
}  // namespace

TEST(Kernels, SplitWidths) {
  EXPECT_DOUBLE_EQ(split_widths(kInf, 0.3), 0.3);
  EXPECT_NEAR(split_widths(2.0, 0.0), 0.25, 1e-16);
  EXPECT_NEAR(split_widths(1.0, 0.1), std::sqrt(0.25 + 0.01), 1e-16);
  EXPECT_THROW(split_widths(0.0, 0.1), InputError);
}

TEST(Kernels, ProfilesAndSizes) {
  auto p4 = profile_for(1e-4), p5 = profile_for(5e-4);
  EXPECT_DOUBLE_EQ(p4.h_ratio, 1.4);
  EXPECT_EQ(p4.n_g, 12);
  EXPECT_DOUBLE_EQ(p5.h_ratio, 1.2);
  EXPECT_EQ(p5.n_g, 10);
  EXPECT_THROW(profile_for(1e-3), InputError);
  EXPECT_EQ(fft_friendly_size(97), 98);
  EXPECT_EQ(fft_friendly_size(61), 63);
  EXPECT_EQ(fft_friendly_size(64), 64);
  EXPECT_EQ(fft_friendly_size(121), 125);
}

TEST(Kernels, ErfPairLimits) {
  const double s1 = 0.2, s2 = 0.7;
  for (double r : {1e-6, 0.01, 0.019, 0.021, 0.3, 2.0})
    EXPECT_NEAR(erf_pair(r, s1, s2), (std::erf(r / s1) - std::erf(r / s2)) / r, 1e-13) << r;
  // r -> 0 limit: 2/sqrt(pi) (1/s1 - 1/s2)
  EXPECT_NEAR(erf_pair(0.0, s1, s2), 2.0 / std::sqrt(kPi) * (1.0 / s1 - 1.0 / s2), 1e-14);
  EXPECT_NEAR(erf_pair(0.5, 0.0, kInf), 2.0, 1e-15);
  EXPECT_EQ(erf_pair(0.5, 0.3, 0.3), 0.0);
}

TEST(Kernels, FieldsAreMinusDerivatives) {
  const double eps = 0.8;
  for (double g_w : {0.0, 0.01, 0.2}) {
    for (double xi : {1.5, 9.2}) {
      for (double r : {0.003, 0.05, 0.2, 0.9}) {
        if (g_w == 0.0 && r < 0.01) continue;
        double h = 1e-4 * std::max(r, g_w);
        double fd_p = -(near_potential_point(r + h, g_w, xi, eps) - near_potential_point(r - h, g_w, xi, eps)) / (2 * h);
        double fd_a = -(near_potential_avg(r + h, g_w, xi, eps) - near_potential_avg(r - h, g_w, xi, eps)) / (2 * h);
        double fp = near_field_point(r, g_w, xi, eps), fa = near_field_avg(r, g_w, xi, eps);
        EXPECT_NEAR(fp, fd_p, 1e-7 * std::abs(fd_p) + 1e-10) << g_w << " " << xi << " " << r;
        EXPECT_NEAR(fa, fd_a, 1e-7 * std::abs(fd_a) + 1e-10) << g_w << " " << xi << " " << r;
      }
    }
  }
}

TEST(Kernels, NearKernelVanishesForZeroSplit) {
  // xi -> 0 keeps the whole kernel in the near field.
  const double g_w = 0.05, eps = 2.0;
  for (double r : {0.01, 0.1, 1.0})
    EXPECT_NEAR(near_potential_avg(r, g_w, 0.0, eps), smoothed_coulomb(r, g_w, eps), 1e-15 / eps / r);
}

TEST(Kernels, SplitIdentityAgainstRadialQuadrature) {
  // near + far = full, with the far part from its radial Fourier integral.
  const double g_w = 0.04, xi = 5.0, eps = 1.0;
  const double tau = 0.5 * g_w * g_w + 0.25 / (xi * xi);
  for (double r : {0.02, 0.1, 0.4}) {
    auto f = [&](double k) { return std::exp(-k * k * tau) * (k * r < 1e-8 ? 1.0 : std::sin(k * r) / (k * r)); };
    double far = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::sqrt(45.0 / tau), 20,
                                                                                1e-15) /
                 (2.0 * kPi * kPi * eps);
    double full = std::erf(r / (std::sqrt(2.0) * g_w)) / (4.0 * kPi * eps * r);
    EXPECT_NEAR(near_potential_point(r, g_w, xi, eps) + far, full, 1e-12 * full);
  }
}

TEST(Kernels, ErfcxMatchesBoost) {
  for (double x : {-3.0, -0.5, 0.0, 0.7, 5.0, 24.9, 25.1, 80.0, 1e4}) {
    long double ref = x < 100 ? std::exp((long double)x * x) * boost::math::erfc((long double)x)
                             : 1.0L / ((long double)x * std::sqrt((long double)kPi)) *
                                   (1 - 1 / (2.0L * x * x) + 3 / (4.0L * x * x * x * x) -
                                    15 / (8.0L * std::pow((long double)x, 6)));
    EXPECT_NEAR(erfcx(x), (double)ref, 1e-13 * (double)ref) << x;
  }
}

TEST(Kernels, TuneCutoffHitsTargetRatio) {
  for (double delta : {1e-4, 5e-4}) {
    for (double g_w : {0.0, 0.02, 0.2}) {
      const double xi = 2.0;
      double r = tune_cutoff(xi, g_w, delta);
      // Ratio of near force to full force, from the independent closed form.
      auto ratio = [&](double rr) {
        double s = std::sqrt(g_w * g_w + 0.5 / (xi * xi));
        double full = near_field_point(rr, g_w, 0.0, 1.0);
        double near = full - near_field_point(rr, s, 0.0, 1.0);
        return std::abs(near / full);
      };
      EXPECT_NEAR(ratio(r), delta, 1e-8 * delta) << delta << " " << g_w;
      EXPECT_GT(ratio(0.99 * r), delta);
    }
  }
  EXPECT_EQ(tune_cutoff(kInf, 0.1, 1e-4), 0.0);
}

TEST(Kernels, PlanFromXiAndConstraints) {
  SlabGeometry g{2, 2, 0.75, 1, 1.0 / 20, 1.0 / 50};
  auto p = plan_grid_xi(g, 0.025, 5e-4, 9.2);
  EXPECT_EQ(p.Nx, 40);
  EXPECT_EQ(p.Ny, 40);
  EXPECT_EQ(p.Nz, 71);
  EXPECT_NEAR(p.g_t, 1.2 * p.h_xy, 1e-15);
  EXPECT_NEAR(split_widths(p.xi, p.g_w), p.g_t, 1e-14);
  EXPECT_NEAR(p.H_E, 5 * p.h_xy, 1e-15);
  EXPECT_NEAR(p.r_cut, p.r_nf + p.n_sigma * p.g_w, 1e-15);
  EXPECT_TRUE(p.constraints_ok());
  // xi above 1/(g_w sqrt 12) violates the efficiency constraint.
  auto q = plan_grid_xi(g, 0.025, 5e-4, 26.0);
  ASSERT_NE(q.first_violation(), nullptr);
  EXPECT_EQ(q.first_violation()->name, "efficiency");
  // a tiny box makes the kernel support exceed the period
  SlabGeometry small{0.3, 0.3, 0.75, 1, 1, 1};
  auto s = plan_grid(small, 0.025, 5e-4, 8);
  EXPECT_FALSE(s.constraints_ok());
}

TEST(Kernels, PlanRejectsResolvedWidth) {
  SlabGeometry g{1, 1, 1, 1, 1, 1};
  EXPECT_THROW(plan_grid(g, 0.5, 5e-4, 16), InputError);
  auto u = plan_grid_unsplit(g, 0.05, 32, 32, 20);
  EXPECT_FALSE(u.split());
  EXPECT_DOUBLE_EQ(u.g_t, 0.05);
  EXPECT_EQ(u.r_cut, 0.0);
}
