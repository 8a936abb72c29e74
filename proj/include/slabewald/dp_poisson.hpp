#pragma once

#include <complex>
#include <vector>

#include "slabewald/chebyshev.hpp"
#include "slabewald/domain.hpp"
#include "slabewald/fourier_cheb.hpp"

namespace slabewald {

// Doubly periodic free-space Poisson solver, eps * Lap(psi) = -rho, on the
// Fourier x Chebyshev grid. For k > 0 the Robin rows psi' -/+ k psi = 0 at
// z0/z1 match decaying exterior solutions. For k = 0 the particular solution
// with psi(z0) = psi(z1) = 0 is returned; the linear mode is added by the caller.
class DtnSolver {
 public:
  explicit DtnSolver(const FourierChebGrid& g);
  // rho and psi hold Chebyshev coefficients per mode; they may alias.
  void solve(const cplx* rho, double eps, cplx* psi) const;
  const FourierChebGrid& grid() const { return g_; }

 private:
  const FourierChebGrid& g_;
  std::vector<int> op_index_;  // mode -> operator
  std::vector<cheb::BvpOperator> ops_;
};

// Mismatches of the free-space solutions at the two walls for one mode.
struct WallMismatch {
  cplx phi_b, E_b, phi_t, E_t;
};

// Harmonic correction of the interior potential for a mode with k > 0, such
// that psi* + correction satisfies continuity of potential and the
// displacement jump conditions at z=0 and z=H. Returns value and d/dz at z.
struct HarmonicCorrection {
  HarmonicCorrection(const SlabGeometry& g, double k, const WallMismatch& m);
  void eval(double z, cplx& value, cplx& dvalue) const;
  // Exterior amplitudes: psi_b^c = a_b e^{kz}, psi_t^c = a_t e^{-k(z-H)}.
  cplx a_b, a_t;

 private:
  long double k_, H_;
  std::complex<long double> cb1_, cb2_, ct1_, ct2_;
};

// Zero-wavenumber linear mode. Inputs are derivatives of the free-space
// solutions: the wall solutions at the ends of the extended domain and at
// the walls, and the interior solution at the walls.
struct K0Inputs {
  double dpsi_b_z0, dpsi_t_z1;
  double dpsi_b_0, dpsi_t_H;
  double dpsi_i_0, dpsi_i_H;
  double sigma_b, sigma_t;  // xy means
  double scale;             // field scale used for the relative discrepancy
};
struct K0Result {
  double A_b, A_t;
  double ai1, ai2, A_i;
  double discrepancy;  // |ai1 - ai2| / scale
};
K0Result combine_k0(const SlabGeometry& g, const K0Inputs& in);

}  // namespace slabewald
