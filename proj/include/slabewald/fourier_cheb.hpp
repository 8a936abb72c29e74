#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace slabewald {

using cplx = std::complex<double>;

// Doubly periodic Fourier x Chebyshev grid on [0,Lx) x [0,Ly) x [z0,z1].
//
// Real fields are stored with z fastest: index (ix*Ny + iy)*Nz + iz, where iz
// runs over Chebyshev extrema nodes from z1 (iz=0) down to z0.
// Spectral fields hold the half spectrum from an r2c transform in xy:
// index (ix*Nyh + iy)*Nz + iz with Nyh = Ny/2+1. Along z a spectral column
// holds either node values or Chebyshev coefficients depending on the step.
//
// Fourier normalization is mean-based: fhat(k) = (1/(Nx*Ny)) sum f e^{-ik.x},
// so fhat(0) is the xy average.
class FourierChebGrid {
 public:
  FourierChebGrid(int nx, int ny, int nz, double lx, double ly, double z0, double z1);
  ~FourierChebGrid();
  FourierChebGrid(const FourierChebGrid&) = delete;
  FourierChebGrid& operator=(const FourierChebGrid&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  int nyh() const { return nyh_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return lx_ / nx_; }
  double hy() const { return ly_ / ny_; }
  double z0() const { return z0_; }
  double z1() const { return z1_; }
  double half_height() const { return 0.5 * (z1_ - z0_); }
  std::size_t real_size() const { return std::size_t(nx_) * ny_ * nz_; }
  std::size_t spec_size() const { return std::size_t(nx_) * nyh_ * nz_; }
  std::size_t num_modes() const { return std::size_t(nx_) * nyh_; }

  const std::vector<double>& z() const { return z_; }
  const std::vector<double>& cc_weights() const { return w_; }

  // Signed wavenumbers for mode (ix, iy); dkx/dky are zero at Nyquist.
  double kx(int ix) const { return kx_[ix]; }
  double ky(int iy) const { return ky_[iy]; }
  double dkx(int ix) const { return dkx_[ix]; }
  double dky(int iy) const { return dky_[iy]; }
  double kmag(std::size_t mode) const;
  // Multiplicity of a half-spectrum column in a full-spectrum sum.
  double hermitian_weight(int iy) const;
  double s_of_z(double z) const { return (z - z0_) / half_height() - 1.0; }

  std::vector<double> make_real() const { return std::vector<double>(real_size(), 0.0); }
  std::vector<cplx> make_spec() const { return std::vector<cplx>(spec_size()); }

  // xy transforms on every z plane. xy_inverse leaves `in` untouched.
  void xy_forward(const double* in, cplx* out) const;
  void xy_inverse(const cplx* in, double* out) const;
  // Single xy plane (row-major ix, iy) -> normalized half spectrum (ix, iy<Nyh).
  void plane_forward(const double* in, cplx* out) const;
  // Along z for every mode, in place.
  void z_values_to_coeffs(cplx* data) const;
  void z_coeffs_to_values(cplx* data) const;

  // fcct: real node values -> Fourier-Chebyshev coefficients and back.
  void forward(const double* in, cplx* out) const;
  void inverse(const cplx* in, double* out) const;

  // d/dz of Chebyshev coefficient columns.
  void z_derivative(const cplx* in, cplx* out) const;
  // Value of every coefficient column at height z.
  std::vector<cplx> evaluate_at(const cplx* coeffs, double z) const;

 private:
  void dct_columns(cplx* data, double pre_mid, double post, bool halve_ends) const;
  int nx_, ny_, nz_, nyh_;
  double lx_, ly_, z0_, z1_;
  std::vector<double> z_, w_, kx_, ky_, dkx_, dky_;
  void* plan_r2c_ = nullptr;
  void* plan_c2r_ = nullptr;
  void* plan_dct_ = nullptr;
  void* plan_plane_ = nullptr;
  mutable std::vector<cplx> scratch_;
};

}  // namespace slabewald
