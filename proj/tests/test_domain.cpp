#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "slabewald/domain.hpp"
#include "slabewald/errors.hpp"

using namespace slabewald;

TEST(Domain, GeometryValidation) {
  SlabGeometry g{2, 3, 1, 1, 0.5, 0.2};
  EXPECT_NO_THROW(g.validate());
  EXPECT_DOUBLE_EQ(g.area(), 6.0);
  EXPECT_TRUE(g.jump_bottom());
  g.H = 0.0;
  EXPECT_THROW(g.validate(), InputError);
  g.H = 1.0;
  g.eps_t = -1.0;
  EXPECT_THROW(g.validate(), InputError);
}

TEST(Domain, CsvRoundTripIsExact) {
  ChargeSet c;
  c.add(0.1, 1.0 / 3.0, 0.7, 1.0);
  c.add(1e-17, 2.5, 0.25, -1.0);
  std::stringstream ss;
  write_charges_csv(ss, c);
  auto back = read_charges_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.x[i], c.x[i]);
    EXPECT_EQ(back.y[i], c.y[i]);
    EXPECT_EQ(back.z[i], c.z[i]);
    EXPECT_EQ(back.q[i], c.q[i]);
  }
}

TEST(Domain, CsvCommentsBlankAndErrors) {
  std::istringstream ok("# comment\n\n0 0 0.5 1\n1,1,0.5,-1\n");
  EXPECT_EQ(read_charges_csv(ok).size(), 2u);
  std::istringstream empty("x,y,z,q\n");
  EXPECT_EQ(read_charges_csv(empty).size(), 0u);
  std::istringstream bad("0,0,0.5,1\n0,0,zz,1\n");
  EXPECT_THROW(read_charges_csv(bad), InputError);
  EXPECT_THROW(read_charges_csv(std::string("/nonexistent/charges.csv")), InputError);
}

TEST(Domain, Electroneutrality) {
  SlabGeometry g{2, 2, 1, 1, 1, 1};
  ChargeSet c;
  c.add(0.5, 0.5, 0.5, 1.0);
  c.add(1.5, 0.5, 0.5, -1.0);
  EXPECT_EQ(check_electroneutrality(c, {}, {}, g), 0.0);
  c.q[1] = -0.9;
  EXPECT_THROW(check_electroneutrality(c, {}, {}, g), InputError);
  // a uniform wall charge compensating the excess
  EXPECT_NO_THROW(check_electroneutrality(c, SurfaceCharge::constant(-0.1 / 4.0), {}, g));
  // empty system is neutral
  EXPECT_EQ(check_electroneutrality(ChargeSet{}, {}, {}, g), 0.0);
}

TEST(Domain, PeriodicGaussianSurfaceMean) {
  const double L = 3.0, s = 0.2, amp = 1.7;
  auto sc = periodic_gaussian_surface(L, L, 1.0, 2.0, s, amp);
  // mean over the period is amp * 2 pi s^2 / L^2
  EXPECT_NEAR(sc.mean(96, 96, L, L), amp * 2.0 * std::numbers::pi * s * s / (L * L), 1e-12);
  EXPECT_NEAR(sc(1.0, 2.0), amp, 1e-12);
  EXPECT_NEAR(sc(1.0 + L, 2.0 - L), sc(1.0, 2.0), 1e-12);
  EXPECT_THROW(periodic_gaussian_surface(L, L, 0, 0, 0.0, 1.0), InputError);
}

TEST(Domain, PositionsWrapAndMargins) {
  SlabGeometry g{2, 2, 1, 1, 1, 1};
  ChargeSet c;
  c.add(-0.5, 4.25, 0.5, 1.0);
  validate_positions(c, g, 0.1, false);
  EXPECT_DOUBLE_EQ(c.x[0], 1.5);
  EXPECT_DOUBLE_EQ(c.y[0], 0.25);
  ChargeSet near_wall;
  near_wall.add(0.1, 0.1, 0.05, 1.0);
  EXPECT_THROW(validate_positions(near_wall, g, 0.1, false), InputError);
  EXPECT_NO_THROW(validate_positions(near_wall, g, 0.1, true));
  near_wall.z[0] = 1.0;
  EXPECT_THROW(validate_positions(near_wall, g, 0.1, true), InputError);
  near_wall.z[0] = NAN;
  EXPECT_THROW(validate_positions(near_wall, g, 0.1, true), InputError);
}
