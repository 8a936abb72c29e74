#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace slabewald {

// Doubly periodic slab [0,Lx) x [0,Ly) x [0,H] with permittivity eps inside,
// eps_b below z=0 and eps_t above z=H.
struct SlabGeometry {
  double Lx = 1.0, Ly = 1.0, H = 1.0;
  double eps = 1.0, eps_b = 1.0, eps_t = 1.0;

  void validate() const;
  double area() const { return Lx * Ly; }
  bool jump_bottom() const { return eps_b != eps; }
  bool jump_top() const { return eps_t != eps; }
};

// Point charges with Gaussian smearing width g_w (shared by all charges).
struct ChargeSet {
  std::vector<double> x, y, z, q;

  std::size_t size() const { return q.size(); }
  void add(double xi, double yi, double zi, double qi);
  void resize(std::size_t n);
  double total_charge() const;
  double total_abs_charge() const;
};

// Surface charge density on a wall. Either a constant or a function of (x,y).
struct SurfaceCharge {
  double uniform = 0.0;
  std::function<double(double, double)> profile;

  static SurfaceCharge constant(double v) { return {v, {}}; }
  bool is_zero() const { return uniform == 0.0 && !profile; }
  double operator()(double x, double y) const { return profile ? profile(x, y) : uniform; }
  // Samples on the nx x ny grid x_i = i*Lx/nx, row-major in (ix, iy).
  std::vector<double> sample(int nx, int ny, double Lx, double Ly) const;
  double mean(int nx, int ny, double Lx, double Ly) const;
};

// amplitude * sum over periodic copies of exp(-|r - r0|^2 / (2 s^2)), copies
// within `images` periods in each direction.
SurfaceCharge periodic_gaussian_surface(double Lx, double Ly, double x0, double y0, double s, double amplitude,
                                        int images = 2);

// Net charge sum(q) + Lx*Ly*(mean sigma_b + mean sigma_t). Throws InputError
// if its magnitude exceeds tol times the total absolute charge.
double check_electroneutrality(const ChargeSet& c, const SurfaceCharge& sb, const SurfaceCharge& st,
                               const SlabGeometry& g, double tol = 1e-10, int nsample = 64);

// Wraps x, y into the periodic box and checks that every charge keeps its
// truncated Gaussian (margin = n_sigma * g_w) inside the slab unless
// allow_wall_overlap is set, in which case only 0 < z < H is required.
void validate_positions(ChargeSet& c, const SlabGeometry& g, double margin, bool allow_wall_overlap);

// CSV with columns x,y,z,q. A header line is skipped if present.
ChargeSet read_charges_csv(std::istream& in);
ChargeSet read_charges_csv(const std::string& path);
void write_charges_csv(std::ostream& out, const ChargeSet& c);

}  // namespace slabewald
