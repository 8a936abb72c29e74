#include "slabewald/fourier_cheb.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slabewald/chebyshev.hpp"
#include "slabewald/parallel.hpp"

namespace slabewald {

FourierChebGrid::FourierChebGrid(int nx, int ny, int nz, double lx, double ly, double z0, double z1)
    : nx_(nx), ny_(ny), nz_(nz), nyh_(ny / 2 + 1), lx_(lx), ly_(ly), z0_(z0), z1_(z1) {
  if (nx < 2 || ny < 2 || nz < 3) throw std::invalid_argument("grid too small");
  if (!(z1 > z0) || !(lx > 0) || !(ly > 0)) throw std::invalid_argument("bad grid extent");
  z_ = cheb::nodes(nz, z0, z1);
  w_ = cheb::cc_weights(nz, z0, z1);
  const double tp = 2.0 * std::numbers::pi;
  kx_.resize(nx);
  dkx_.resize(nx);
  for (int i = 0; i < nx; ++i) {
    int m = (i <= nx / 2) ? i : i - nx;
    kx_[i] = tp * m / lx;
    dkx_[i] = (nx % 2 == 0 && i == nx / 2) ? 0.0 : kx_[i];
  }
  ky_.resize(nyh_);
  dky_.resize(nyh_);
  for (int j = 0; j < nyh_; ++j) {
    ky_[j] = tp * j / ly;
    dky_[j] = (ny % 2 == 0 && j == ny / 2) ? 0.0 : ky_[j];
  }

  std::vector<double> rbuf(real_size());
  std::vector<cplx> cbuf(spec_size());
  int n2[2] = {nx, ny};
  int inembed[2] = {nx, ny};
  int onembed[2] = {nx, nyh_};
  auto* cb = reinterpret_cast<fftw_complex*>(cbuf.data());
  plan_r2c_ = fftw_plan_many_dft_r2c(2, n2, nz, rbuf.data(), inembed, nz, 1, cb, onembed, nz, 1,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_c2r_ = fftw_plan_many_dft_c2r(2, n2, nz, cb, onembed, nz, 1, rbuf.data(), inembed, nz, 1,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  std::vector<double> zbuf(nz);
  plan_dct_ = fftw_plan_r2r_1d(nz, zbuf.data(), zbuf.data(), FFTW_REDFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
  std::vector<double> pbuf(std::size_t(nx) * ny);
  std::vector<cplx> pcbuf(num_modes());
  plan_plane_ = fftw_plan_dft_r2c_2d(nx, ny, pbuf.data(), reinterpret_cast<fftw_complex*>(pcbuf.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_r2c_ || !plan_c2r_ || !plan_dct_ || !plan_plane_) throw std::runtime_error("fftw planning failed");
}

FourierChebGrid::~FourierChebGrid() {
  if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
  if (plan_dct_) fftw_destroy_plan(static_cast<fftw_plan>(plan_dct_));
  if (plan_plane_) fftw_destroy_plan(static_cast<fftw_plan>(plan_plane_));
}

double FourierChebGrid::kmag(std::size_t mode) const {
  int ix = static_cast<int>(mode / nyh_), iy = static_cast<int>(mode % nyh_);
  return std::hypot(kx_[ix], ky_[iy]);
}

double FourierChebGrid::hermitian_weight(int iy) const {
  if (iy == 0) return 1.0;
  if (ny_ % 2 == 0 && iy == ny_ / 2) return 1.0;
  return 2.0;
}

void FourierChebGrid::xy_forward(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
  const double s = 1.0 / (double(nx_) * ny_);
  const std::size_t n = spec_size();
  for (std::size_t i = 0; i < n; ++i) out[i] *= s;
}

void FourierChebGrid::plane_forward(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_plane_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
  const double s = 1.0 / (double(nx_) * ny_);
  for (std::size_t i = 0; i < num_modes(); ++i) out[i] *= s;
}

void FourierChebGrid::xy_inverse(const cplx* in, double* out) const {
  scratch_.assign(in, in + spec_size());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_), reinterpret_cast<fftw_complex*>(scratch_.data()),
                       out);
}

// DCT-I of every column, real and imaginary parts separately through a
// contiguous buffer (a strided batched plan is several times slower).
void FourierChebGrid::dct_columns(cplx* data, double pre_mid, double post, bool halve_ends) const {
  const int n = nz_;
  parallel_for(num_modes(), [&](std::size_t b, std::size_t e) {
    std::vector<double> re(n), im(n);
    for (std::size_t m = b; m < e; ++m) {
      cplx* c = data + m * n;
      for (int k = 0; k < n; ++k) {
        double f = (k == 0 || k == n - 1) ? 1.0 : pre_mid;
        re[k] = f * c[k].real();
        im[k] = f * c[k].imag();
      }
      fftw_execute_r2r(static_cast<fftw_plan>(plan_dct_), re.data(), re.data());
      fftw_execute_r2r(static_cast<fftw_plan>(plan_dct_), im.data(), im.data());
      for (int k = 0; k < n; ++k) {
        double f = (halve_ends && (k == 0 || k == n - 1)) ? 0.5 * post : post;
        c[k] = cplx(f * re[k], f * im[k]);
      }
    }
  });
}

void FourierChebGrid::z_values_to_coeffs(cplx* data) const { dct_columns(data, 1.0, 1.0 / (nz_ - 1), true); }

void FourierChebGrid::z_coeffs_to_values(cplx* data) const { dct_columns(data, 0.5, 1.0, false); }

void FourierChebGrid::forward(const double* in, cplx* out) const {
  xy_forward(in, out);
  z_values_to_coeffs(out);
}

void FourierChebGrid::inverse(const cplx* in, double* out) const {
  std::vector<cplx> tmp(in, in + spec_size());
  z_coeffs_to_values(tmp.data());
  xy_inverse(tmp.data(), out);
}

void FourierChebGrid::z_derivative(const cplx* in, cplx* out) const {
  const double s = 1.0 / half_height();
  parallel_for(num_modes(), [&](std::size_t b, std::size_t e) {
    for (std::size_t m = b; m < e; ++m) {
      cheb::differentiate(in + m * nz_, out + m * nz_, nz_);
      for (int k = 0; k < nz_; ++k) out[m * nz_ + k] *= s;
    }
  });
}

std::vector<cplx> FourierChebGrid::evaluate_at(const cplx* coeffs, double z) const {
  std::vector<cplx> v(num_modes());
  const double s = s_of_z(z);
  parallel_for(num_modes(), [&](std::size_t b, std::size_t e) {
    for (std::size_t m = b; m < e; ++m) v[m] = cheb::evaluate(coeffs + m * nz_, nz_, s);
  });
  return v;
}

}  // namespace slabewald
