#pragma once

#include <limits>
#include <string>
#include <vector>

#include "slabewald/domain.hpp"

namespace slabewald {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Grid resolution profile for a target tolerance delta.
struct Profile {
  double delta = 5e-4;
  double h_ratio = 1.2;  // g_t / h_xy
  int n_g = 10;          // grid cells in the truncated kernel support
  double n_sigma() const { return 0.5 * n_g / h_ratio; }
};

// delta = 1e-4 -> (1.4, 12); delta = 5e-4 -> (1.2, 10). Other values throw.
Profile profile_for(double delta);

// g_t = sqrt(1/(4 xi^2) + g_w^2); xi may be infinite.
double split_widths(double xi, double g_w);

// Slowly varying part of a pair kernel: [erf(r/s1) - erf(r/s2)] / r with
// s1 <= s2. s1 = 0 is a point source, s2 = inf drops the second term.
double erf_pair(double r, double s1, double s2);
double erf_pair_dr(double r, double s1, double s2);

// Near-field kernels (including the 1/(4 pi eps) prefactor).
double near_potential_point(double r, double g_w, double xi, double eps);
double near_potential_avg(double r, double g_w, double xi, double eps);
// Radial field magnitude -dG/dr; the vector contribution is this times r_hat.
double near_field_point(double r, double g_w, double xi, double eps);
double near_field_avg(double r, double g_w, double xi, double eps);
// Potential of a Gaussian cloud with standard deviation s: erf(r/(sqrt2 s))/(4 pi eps r).
double gaussian_cloud_potential(double r, double s, double eps);

// Smallest m >= n whose prime factors are all in {2, 3, 5, 7}.
int fft_friendly_size(int n);

// exp(x^2) erfc(x).
double erfcx(double x);

// Smallest r in [g_t, 20 g_t] where the near-field force ratio drops below delta.
double tune_cutoff(double xi, double g_w, double delta);

struct Constraint {
  std::string name;
  double value = 0.0;  // must be < bound
  double bound = 0.0;
  bool ok = true;
  std::string description;
  double margin() const { return bound - value; }
};

struct EwaldParams {
  double xi = kInf;
  double g_w = 0.0;
  double g_t = 0.0;
  double delta = 5e-4;
  int n_g = 10;
  double n_sigma = 0.0;
  double h_xy = 0.0;
  double hx = 0.0, hy = 0.0;
  double H_E = 0.0;
  double r_nf = 0.0;
  double r_cut = 0.0;
  double k_max = 0.0;
  int Nx = 0, Ny = 0, Nz = 0;
  int n_img = 1;
  double h_min = 0.0;
  double z0 = 0.0, z1 = 0.0;
  std::vector<Constraint> constraints;

  bool split() const { return xi < kInf; }
  bool constraints_ok() const;
  const Constraint* first_violation() const;
};

struct PlanOptions {
  // Minimum charge-wall distance h used in the constraints; <= 0 means n_sigma*g_w.
  double h_min = -1.0;
  // Round Nz up so that 2Nz-2 has only factors 2, 3, 5, 7.
  bool fft_friendly_nz = false;
  // Overrides of the profile constants (used for the unsplit reference).
  double h_ratio = 0.0;
  int n_g = 0;
};

// Plan from grid size; ny <= 0 picks the closest spacing to Lx/nx.
EwaldParams plan_grid(const SlabGeometry& g, double g_w, double delta, int nx, int ny = 0,
                      const PlanOptions& opt = {});
// Plan from a target xi: Nx = round(Lx/h) with h = g_t/h_ratio, then xi is recomputed.
EwaldParams plan_grid_xi(const SlabGeometry& g, double g_w, double delta, double xi, const PlanOptions& opt = {});
// Plan without splitting (xi = inf, g_t = g_w): grid spacing h, n_g cells of support.
EwaldParams plan_grid_unsplit(const SlabGeometry& g, double g_w, int nx, int ny, int n_g);

// Re-evaluates the constraint list for given parameters and h_min.
void evaluate_constraints(EwaldParams& p, const SlabGeometry& g);

}  // namespace slabewald
