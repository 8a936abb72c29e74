#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "slabewald/domain.hpp"
#include "slabewald/slab_solver.hpp"

namespace slabewald {

struct FieldSample {
  std::vector<double> phi;
  std::vector<std::array<double, 3>> E;
};

// Laterally unbounded slab: averaged potential and field at each charge from
// all charges plus their reflected image series (n_images images per charge,
// split evenly between the two families). Kernel erf(r/(2 g_w))/(4 pi eps r).
// Charge positions are used as given (no wrapping).
FieldSample free_space_slab_reference(const ChargeSet& c, const SlabGeometry& g, double g_w, int n_images = 400);

// Image positions and strengths (per unit source charge) of the two-wall series
// for a source at height z, excluding the source itself.
struct ImageTerm {
  double z, factor;
};
std::vector<ImageTerm> slab_image_series(double z, const SlabGeometry& g, int n_images);

// Reference without Ewald splitting: plain grid solve that resolves g_w,
// h = g_w / h_factor; the Gaussian support is cut at n_sigma g_w whatever the spacing.
struct NoSplitOptions {
  double h_factor = 1.6;
  double n_sigma = 6.25;
  std::size_t max_nodes = std::size_t(1) << 27;
};
EwaldParams no_split_params(const SlabGeometry& g, double g_w, const NoSplitOptions& o = {});
SolveResult no_split_reference(const SlabGeometry& g, double g_w, ChargeSet c, const SurfaceCharge& sb = {},
                               const SurfaceCharge& st = {}, const NoSplitOptions& o = {});

// Energy/force consistency: W1 = -[U(X + d0/2 D) - U(X - d0/2 D)]/d0 and
// W2 = sum q E.D with E at the unperturbed configuration.
struct WorkCheck {
  double W1 = 0.0, W2 = 0.0, reldiff = 0.0;
  bool degenerate = false;
};
WorkCheck work_check(SlabSolver& solver, const ChargeSet& c, const SurfaceCharge& sb, const SurfaceCharge& st,
                     double delta0, const std::vector<std::array<double, 3>>& dir);
std::vector<std::array<double, 3>> random_unit_directions(std::size_t n, std::uint64_t seed);

// Value at L = inf assuming v(L) = v_inf + c/L.
double extrapolate_inverse_length(double L1, double v1, double L2, double v2);

// Classical Ewald sum for Gaussian charges (standard deviation g_w, averaged
// pair kernel) in a triply periodic box. Returns averaged potentials and fields.
FieldSample ewald_sum_gaussian(const ChargeSet& c, double Lx, double Ly, double Lz, double eps, double g_w,
                               double alpha, int kmax, int nreal);

}  // namespace slabewald
