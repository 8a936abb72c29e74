#pragma once

#include <array>
#include <memory>
#include <vector>

#include "slabewald/domain.hpp"

namespace slabewald {

// eps * Lap(phi) = -rho on a uniform periodic nx x ny x nz grid (index
// (ix*ny + iy)*nz + iz). The k = 0 mode of phi is set to zero.
void solve_triply_periodic(int nx, int ny, int nz, double lx, double ly, double lz, double eps, const double* rho,
                           double* phi);

// Spectral Ewald for Gaussian charges in a triply periodic box, used by the
// bulk-electrolyte runs. Same kernels as the slab solver: Gaussian spreading of
// width g_t, averaged near-field kernel truncated at r_cut.
class TriplyPeriodicEwald {
 public:
  // Grid spacing about g_t / h_ratio (rounded to an FFT-friendly size) and
  // support n_g cells from the accuracy profile.
  TriplyPeriodicEwald(double L, double eps, double g_w, double xi, double delta);
  ~TriplyPeriodicEwald();

  void compute(const ChargeSet& c, std::vector<double>& phi, std::vector<std::array<double, 3>>& E) const;

  int n() const { return n_; }
  double xi() const { return xi_; }
  double r_cut() const { return r_cut_; }

 private:
  double L_, eps_, g_w_, xi_, g_t_, h_, radius_, r_cut_;
  int n_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace slabewald
