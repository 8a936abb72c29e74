#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "slabewald/domain.hpp"
#include "slabewald/dp_poisson.hpp"
#include "slabewald/fourier_cheb.hpp"
#include "slabewald/kernels.hpp"

namespace slabewald {

struct SolverOptions {
  bool enforce_constraints = true;
  // Accept charges whose truncated Gaussian crosses a wall (only 0<z<H checked).
  bool allow_wall_overlap = false;
  // Subtract the free-space self potential q*Gbar(0; g_w, xi=0) from phi_bar.
  bool subtract_self = false;
  bool compute_energy = false;
  // Relative ai1/ai2 discrepancy thresholds.
  double k0_warn = 1e-3;
  double k0_fail = 1e-2;
  double neutrality_tol = 1e-10;
};

// Charges split by distance to the walls, plus first images of the charges
// whose far-field support reaches a wall with a permittivity jump.
struct Partition {
  std::vector<std::size_t> over, far;
  ChargeSet images;
};

struct SolveDiagnostics {
  double ai1 = 0.0, ai2 = 0.0, A_i = 0.0, B_i = 0.0;
  double ai_discrepancy = 0.0;
  std::size_t n_over = 0, n_far = 0, n_images = 0;
  double h_min = 0.0;
  std::vector<Constraint> constraints;
  std::vector<std::string> warnings;
};

struct SolveResult {
  std::vector<double> phi_bar;
  std::vector<std::array<double, 3>> E_bar;
  double U = 0.0;
  bool has_energy = false;
  SolveDiagnostics diag;
};

Partition build_partition(const ChargeSet& c, const SlabGeometry& g, double H_E);

class SlabSolver {
 public:
  SlabSolver(const SlabGeometry& g, const EwaldParams& p, const SolverOptions& opt = {});
  ~SlabSolver();

  // Charges are wrapped into the box in place.
  SolveResult solve(ChargeSet& charges, const SurfaceCharge& sigma_b = {}, const SurfaceCharge& sigma_t = {});

  const SlabGeometry& geometry() const { return geom_; }
  const EwaldParams& params() const { return params_; }
  const FourierChebGrid& grid() const { return *grid_; }
  SolverOptions& options() { return opt_; }

 private:
  SlabGeometry geom_;
  EwaldParams params_;
  SolverOptions opt_;
  std::unique_ptr<FourierChebGrid> grid_;
  std::unique_ptr<DtnSolver> dtn_;
};

// Near-field sums over real charges and their first images with the
// averaged kernel, truncated at r_cut. Adds into phi and E.
void near_field_sum(const ChargeSet& c, const SlabGeometry& g, const EwaldParams& p, bool subtract_self,
                    std::vector<double>& phi, std::vector<std::array<double, 3>>& E);

// Pointwise near-field potential at a location (pointwise kernel, images included).
double near_potential_at(const ChargeSet& c, const SlabGeometry& g, const EwaldParams& p, double x, double y,
                         double z);

// xy Fourier transform at vertical distance d of the pointwise near kernel,
// F(k, d; g_w) - F(k, d; sqrt(g_w^2 + 1/(2 xi^2))).
double near_kernel_plane_transform(double k, double d, double g_w, double xi, double eps);

}  // namespace slabewald
