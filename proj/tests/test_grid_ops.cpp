#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slabewald/fourier_cheb.hpp"
#include "slabewald/grid_ops.hpp"
#include "slabewald/parallel.hpp"

using namespace slabewald;

namespace {
constexpr double kPi = std::numbers::pi;

struct Pts {
  std::vector<double> x, y, z, q;
  PointSet view() const { return {x.data(), y.data(), z.data(), q.size()}; }
};

Pts random_points(std::size_t n, const FourierChebGrid& g, double zlo, double zhi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Pts p;
  for (std::size_t i = 0; i < n; ++i) {
    p.x.push_back(g.lx() * u(rng));
    p.y.push_back(g.ly() * u(rng));
    p.z.push_back(zlo + (zhi - zlo) * u(rng));
    p.q.push_back(u(rng) - 0.5);
  }
  return p;
}

double wrap(double d, double L) { return d - L * std::round(d / L); }
}  // namespace

TEST(FourierCheb, RoundTripAndNormalization) {
  FourierChebGrid g(12, 10, 17, 2.0, 1.5, -0.4, 1.3);
  auto f = g.make_real();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (auto& v : f) v = n01(rng);
  auto spec = g.make_spec();
  g.forward(f.data(), spec.data());
  auto back = g.make_real();
  g.inverse(spec.data(), back.data());
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(back[i], f[i], 1e-13);

  // f = 3 + cos(2 pi x / Lx) T_2(s): mode (1,0) coefficient 2 is 1/2, mode (0,0) coefficient 0 is 3
  const auto& z = g.z();
  for (int ix = 0; ix < 12; ++ix)
    for (int iy = 0; iy < 10; ++iy)
      for (int iz = 0; iz < 17; ++iz) {
        double s = g.s_of_z(z[iz]);
        f[(ix * 10 + iy) * 17 + iz] = 3.0 + std::cos(2 * kPi * ix / 12.0) * (2 * s * s - 1);
      }
  g.forward(f.data(), spec.data());
  const int nyh = g.nyh();
  EXPECT_NEAR(spec[0].real(), 3.0, 1e-14);
  EXPECT_NEAR(std::abs(spec[(1 * nyh + 0) * 17 + 2] - cplx(0.5, 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(spec[(11 * nyh + 0) * 17 + 2] - cplx(0.5, 0.0)), 0.0, 1e-14);
  double rest = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) rest += std::abs(spec[i]);
  EXPECT_NEAR(rest, 4.0, 1e-12);
}

TEST(FourierCheb, DerivativeAndEvaluation) {
  FourierChebGrid g(4, 4, 12, 1.0, 1.0, 0.0, 2.0);
  auto f = g.make_real();
  const auto& z = g.z();
  for (int col = 0; col < 16; ++col)
    for (int iz = 0; iz < 12; ++iz) f[col * 12 + iz] = std::pow(z[iz], 5) - z[iz];
  auto spec = g.make_spec(), d = g.make_spec();
  g.forward(f.data(), spec.data());
  g.z_derivative(spec.data(), d.data());
  auto at = g.evaluate_at(d.data(), 1.3);
  auto v = g.evaluate_at(spec.data(), 0.7);
  EXPECT_NEAR(at[0].real(), 5 * std::pow(1.3, 4) - 1, 1e-11);
  EXPECT_NEAR(v[0].real(), std::pow(0.7, 5) - 0.7, 1e-13);
  for (std::size_t m = 1; m < g.num_modes(); ++m) EXPECT_NEAR(std::abs(at[m]), 0.0, 1e-12);
  double wsum = 0.0;
  for (double w : g.cc_weights()) wsum += w;
  EXPECT_NEAR(wsum, 2.0, 1e-14);
}

TEST(GridOps, SpreadMatchesDirectEvaluation) {
  FourierChebGrid g(16, 12, 25, 1.0, 0.8, -0.5, 1.5);
  GaussianKernel k{0.07, 0.25};
  auto p = random_points(7, g, -0.2, 1.2, 11);
  auto grid = g.make_real();
  spread(g, p.view(), p.q.data(), k, grid.data());
  const double c = std::pow(2 * kPi * k.width * k.width, -1.5);
  double worst = 0.0;
  for (int ix = 0; ix < 16; ++ix)
    for (int iy = 0; iy < 12; ++iy)
      for (int iz = 0; iz < 25; ++iz) {
        double ref = 0.0;
        for (std::size_t j = 0; j < p.q.size(); ++j) {
          double dx = wrap(ix * g.hx() - p.x[j], g.lx()), dy = wrap(iy * g.hy() - p.y[j], g.ly());
          double dz = g.z()[iz] - p.z[j];
          if (std::abs(dx) > k.radius || std::abs(dy) > k.radius || std::abs(dz) > k.radius) continue;
          ref += p.q[j] * c * std::exp(-(dx * dx + dy * dy + dz * dz) / (2 * k.width * k.width));
        }
        worst = std::max(worst, std::abs(grid[(ix * 12 + iy) * 25 + iz] - ref));
      }
  EXPECT_LT(worst, 1e-12);
}

TEST(GridOps, SpreadInterpolateAdjoint) {
  FourierChebGrid g(12, 10, 17, 1.2, 1.0, -0.3, 1.3);
  GaussianKernel k{0.09, 0.3};
  auto p = random_points(9, g, -0.1, 1.1, 5);
  auto grid = g.make_real();
  spread(g, p.view(), p.q.data(), k, grid.data());
  auto f = g.make_real();
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  for (auto& v : f) v = n01(rng);
  std::vector<double> fi(p.q.size());
  interpolate(g, p.view(), {f.data()}, k, {fi.data()});
  double lhs = 0.0, rhs = 0.0;
  const auto& w = g.cc_weights();
  for (std::size_t i = 0; i < f.size(); ++i) lhs += g.hx() * g.hy() * w[i % g.nz()] * grid[i] * f[i];
  for (std::size_t j = 0; j < p.q.size(); ++j) rhs += p.q[j] * fi[j];
  EXPECT_NEAR(lhs, rhs, 1e-14 * std::max(1.0, std::abs(lhs)));
}

TEST(GridOps, SpreadConservesCharge) {
  // Well resolved Gaussian: the grid quadrature of the spread density is q.
  FourierChebGrid g(32, 32, 129, 1.0, 1.0, 0.0, 1.0);
  GaussianKernel k{0.06, 0.48};
  Pts p;
  p.x = {0.31};
  p.y = {0.77};
  p.z = {0.5};
  p.q = {1.0};
  auto grid = g.make_real();
  spread(g, p.view(), p.q.data(), k, grid.data());
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) total += g.hx() * g.hy() * g.cc_weights()[i % 129] * grid[i];
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(GridOps, ThreadCountDoesNotChangeBits) {
  FourierChebGrid g(20, 18, 21, 1.0, 1.0, -0.3, 1.3);
  GaussianKernel k{0.05, 0.2};
  auto p = random_points(200, g, 0.0, 1.0, 17);
  std::vector<std::vector<double>> outs;
  for (int t : {1, 3, 4}) {
    set_num_threads(t);
    auto grid = g.make_real();
    spread(g, p.view(), p.q.data(), k, grid.data());
    std::vector<double> fi(p.q.size());
    interpolate(g, p.view(), {grid.data()}, k, {fi.data()});
    grid.insert(grid.end(), fi.begin(), fi.end());
    outs.push_back(std::move(grid));
  }
  set_num_threads(1);
  EXPECT_EQ(outs[0], outs[1]);
  EXPECT_EQ(outs[0], outs[2]);
}

TEST(GridOps, PointOutsideDomainThrows) {
  FourierChebGrid g(8, 8, 9, 1.0, 1.0, 0.0, 1.0);
  Pts p;
  p.x = {0.5};
  p.y = {0.5};
  p.z = {1.2};
  p.q = {1.0};
  auto grid = g.make_real();
  EXPECT_ANY_THROW(spread(g, p.view(), p.q.data(), GaussianKernel{0.1, 0.3}, grid.data()));
}
